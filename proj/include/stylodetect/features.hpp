#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "stylodetect/corpus.hpp"
#include "stylodetect/lexicon.hpp"
#include "stylodetect/ngram_lm.hpp"
#include "stylodetect/textproc.hpp"
#include "stylodetect/vectorize.hpp"

namespace stylo::fea {

enum class Category {
    perplexity,
    semantic,
    list_lookup,
    document,
    error_based,
    readability,
    ai_feedback,
    text_vector,
};

// Whether a feature belongs to the established stylometric repertoire or is
// one of the ten additions.
enum class Tag { traditional, novel };

const char* to_string(Category c);
const char* to_string(Tag t); // "traditional" / "new"
Category category_from_string(const std::string& s);

struct FeatureDescriptor {
    std::string name;
    Category category = Category::document;
    Tag tag = Tag::traditional;
    size_t arity = 1; // >1 for vector blocks, expanded to name_0..name_{k-1}
};

class FeatureSchema {
public:
    FeatureSchema() = default;
    explicit FeatureSchema(std::vector<FeatureDescriptor> descriptors);

    // The full inventory: 34 scalars in 7 categories plus the TF-IDF block,
    // the sentence-vector block, and the vector-distance scalar. `tfidf_terms`
    // shrinks below the 500 cap when the fitted vocabulary is smaller.
    static FeatureSchema standard(size_t embedding_dim, size_t tfidf_terms = 500);

    const std::vector<FeatureDescriptor>& descriptors() const { return descriptors_; }
    size_t total_arity() const;
    // Flat column names: scalars keep their name, blocks expand with _i.
    std::vector<std::string> column_names() const;
    const FeatureDescriptor* find(const std::string& name) const;

private:
    std::vector<FeatureDescriptor> descriptors_;
};

// A named row of the ablation table: which categories and tags to keep.
struct Selection {
    std::string name;
    std::set<Category> categories;
    bool keep_traditional = false;
    bool keep_novel = false;

    bool admits(const FeatureDescriptor& d) const;
};

// The 14 recognized selection presets, e.g. "Document_traditional",
// "ErrorBased_new", "All_traditional+new". Throws on anything else.
Selection selection_from_name(const std::string& name);
const std::vector<std::string>& selection_preset_names();

FeatureSchema subset(const FeatureSchema& schema, const Selection& sel);

struct FeatureVector {
    std::vector<std::string> names; // expanded column names
    std::vector<double> values;
    std::map<std::string, std::string> provenance; // category -> provider id
};

// ---------------------------------------------------------------------------
// Providers

class GrammarProvider {
public:
    virtual ~GrammarProvider() = default;
    virtual int error_count(const std::string& body) = 0;
    virtual std::string id() const = 0;
};

// Offline spelling/grammar heuristics: dictionary misses (skipping numerals
// and capitalized non-sentence-initial tokens), doubled words, and a/an
// vowel disagreement.
class RuleGrammar final : public GrammarProvider {
public:
    explicit RuleGrammar(const text::LexiconSet& lex) : lex_(&lex) {}
    int error_count(const std::string& body) override;
    std::string id() const override { return "grammar-rules"; }

private:
    const text::LexiconSet* lex_;
};

class ChatProvider {
public:
    virtual ~ChatProvider() = default;
    virtual std::string feedback(const std::string& body) = 0;
    virtual std::string id() const = 0;
};

struct FeatureProviders {
    const lm::SentenceScorer* scorer = nullptr;
    std::string scorer_id = "ngram-lm";
    const text::LexiconSet* lexicon = nullptr;
    GrammarProvider* grammar = nullptr;
    ChatProvider* chat = nullptr;
    const vec::TfidfModel* tfidf = nullptr;
    const vec::SentenceEmbedder* embedder = nullptr;
    bool impute_ai_feedback = false; // substitute the neutral value when chat is unavailable
};

// ---------------------------------------------------------------------------
// Per-category computations

struct SemanticFeatures {
    double polarity = 0.0;     // [-1, 1]
    double subjectivity = 0.0; // [0, 1]
};
// Mean lexicon polarity/subjectivity over matched word tokens; polarity is
// sign-flipped when one of the 3 preceding word tokens in the sentence is a
// negator. (0, 0) when nothing matches.
SemanticFeatures semantic_features(const text::StructuredText& doc, const text::LexiconSet& lex);

struct ListLookupFeatures {
    double stop_word_count = 0;
    double special_char_count = 0;
    double discourse_marker_count = 0;
    double title_repetition_count = 0;
    double title_repetition_relative = 0;
};
ListLookupFeatures list_lookup_features(const text::StructuredText& doc, const std::string& title,
                                        const text::LexiconSet& lex);

// The 20 document-statistics features keyed by column name.
std::map<std::string, double> document_features(const text::StructuredText& doc,
                                                const text::LexiconSet& lex);

struct ErrorFeatures {
    double grammar_error_count = 0;
    double multi_blank_count = 0;
};
ErrorFeatures error_features(const std::string& body, GrammarProvider& grammar);

// Maximal runs of >= 2 consecutive spaces.
int multi_blank_count(const std::string& body);

struct ReadabilityFeatures {
    double flesch_reading_ease = 0;       // unclamped
    double flesch_kincaid_grade_level = 0;
};
ReadabilityFeatures readability_features(const text::StructuredText& doc);

// Leading-token rule over the provider's reply: affirmative 2, negative 0,
// anything else 1.
int classify_feedback(const std::string& response);
int ai_feedback_feature(const std::string& body, ChatProvider* chat, bool impute);

// ---------------------------------------------------------------------------
// Assembly and export

// Computes exactly the features the selection admits, in schema order.
// Provider failures are rethrown with the sample id attached.
FeatureVector assemble(const corpus::TextSample& sample, const FeatureProviders& providers,
                       const FeatureSchema& schema, const Selection& sel);

// Violated range constraints ("name: reason"); empty when the vector is valid.
std::vector<std::string> range_violations(const FeatureVector& fv);

// CSV with one column per feature plus trailing id and label columns.
std::string feature_matrix_csv(const std::vector<FeatureVector>& rows,
                               const std::vector<std::string>& ids,
                               const std::vector<int>& labels);
std::string schema_json(const FeatureSchema& schema);

} // namespace stylo::fea
