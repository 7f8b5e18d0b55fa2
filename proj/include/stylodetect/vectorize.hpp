#pragma once

#include <string>
#include <vector>

namespace stylo::text {
struct StructuredText;
}

namespace stylo::vec {

// Casefolded word 1-grams plus within-sentence 2-grams ("w1 w2");
// punctuation tokens are excluded.
std::vector<std::string> word_ngrams(const text::StructuredText& doc);
std::vector<std::string> word_ngrams(const std::string& body);

// TF-IDF over word 1-/2-grams. The vocabulary comes only from the documents
// passed to fit(), capped at `max_terms`, ranked by document frequency with
// lexicographic tie-breaks; idf(t) = ln((1+N)/(1+df)) + 1.
class TfidfModel {
public:
    // Throws std::invalid_argument on fewer than 2 training documents.
    static TfidfModel fit(const std::vector<std::string>& train_docs, size_t max_terms = 500,
                          const std::string& fingerprint = "");

    // tf * idf in vocabulary order, L2-normalized; all-OOV input gives the
    // zero vector.
    std::vector<double> transform(const std::string& body) const;
    std::vector<double> transform(const text::StructuredText& doc) const;

    const std::vector<std::string>& vocabulary() const { return vocabulary_; }
    const std::vector<double>& idf() const { return idf_; }
    const std::string& fitted_on() const { return fitted_on_; }
    size_t dim() const { return vocabulary_.size(); }

    std::string to_json() const;
    static TfidfModel from_json(const std::string& json_text);

private:
    std::vector<std::string> vocabulary_;
    std::vector<double> idf_;
    std::string fitted_on_;
};

// Per-sentence embedding source; the batch must return one vector per input
// of a consistent dimension.
class SentenceEmbedder {
public:
    virtual ~SentenceEmbedder() = default;
    virtual std::vector<std::vector<double>> embed(const std::vector<std::string>& sentences) const = 0;
    virtual size_t dim() const = 0;
    virtual std::string id() const = 0; // recorded in feature provenance
};

// Offline embedding: signed hashing of word 1-/2-grams into `dim` buckets,
// L2-normalized per sentence. Deterministic across runs and machines; a
// sentence without word tokens maps to the zero vector.
class HashedEmbedder : public SentenceEmbedder {
public:
    explicit HashedEmbedder(size_t dim = 256) : dim_(dim) {}
    std::vector<std::vector<double>> embed(const std::vector<std::string>& sentences) const override;
    size_t dim() const override { return dim_; }
    std::string id() const override { return "hashed-ngram-" + std::to_string(dim_); }

private:
    size_t dim_;
};

struct EmbeddingBlock {
    std::vector<std::vector<double>> sentence_vectors; // unit (or zero) vectors
    std::vector<double> doc_mean;                      // L2-normalized mean
    double mean_distance = 0.0; // (1/S) sum of cosine distances to the mean
};

// Embeds every sentence of `doc` (its raw text span) and derives the mean
// vector and mean cosine distance. Cosine distance involving a zero vector
// counts as 0. Provider errors are rethrown with the sentence index.
EmbeddingBlock embed_sentences(const SentenceEmbedder& provider, const text::StructuredText& doc);

double cosine_distance(const std::vector<double>& a, const std::vector<double>& b);

} // namespace stylo::vec
