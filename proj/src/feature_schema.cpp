#include "stylodetect/features.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace stylo::fea {

using ojson = nlohmann::ordered_json;

const char* to_string(Category c) {
    switch (c) {
        case Category::perplexity: return "perplexity";
        case Category::semantic: return "semantic";
        case Category::list_lookup: return "list_lookup";
        case Category::document: return "document";
        case Category::error_based: return "error_based";
        case Category::readability: return "readability";
        case Category::ai_feedback: return "ai_feedback";
        case Category::text_vector: return "text_vector";
    }
    return "?";
}

const char* to_string(Tag t) { return t == Tag::traditional ? "traditional" : "new"; }

Category category_from_string(const std::string& s) {
    for (Category c : {Category::perplexity, Category::semantic, Category::list_lookup,
                       Category::document, Category::error_based, Category::readability,
                       Category::ai_feedback, Category::text_vector})
        if (s == to_string(c)) return c;
    throw std::invalid_argument("unknown feature category: " + s);
}

FeatureSchema::FeatureSchema(std::vector<FeatureDescriptor> descriptors)
    : descriptors_(std::move(descriptors)) {
    std::set<std::string> seen;
    for (const auto& d : descriptors_) {
        if (d.name.empty()) throw std::invalid_argument("feature descriptor with empty name");
        if (d.arity == 0) throw std::invalid_argument(d.name + ": feature arity must be positive");
        if (!seen.insert(d.name).second)
            throw std::invalid_argument("duplicate feature name: " + d.name);
    }
}

FeatureSchema FeatureSchema::standard(size_t embedding_dim, size_t tfidf_terms) {
    if (embedding_dim == 0) throw std::invalid_argument("embedding dim must be positive");
    if (tfidf_terms == 0 || tfidf_terms > 500)
        throw std::invalid_argument("tfidf_terms must be in [1, 500]");
    using C = Category;
    using T = Tag;
    std::vector<FeatureDescriptor> d{
        {"PPL_mean", C::perplexity, T::traditional, 1},
        {"PPL_max", C::perplexity, T::traditional, 1},
        {"sentiment_polarity", C::semantic, T::traditional, 1},
        {"sentiment_subjectivity", C::semantic, T::novel, 1},
        {"stopWord_count", C::list_lookup, T::traditional, 1},
        {"specialChar_count", C::list_lookup, T::traditional, 1},
        {"discourseMarker_count", C::list_lookup, T::novel, 1},
        {"titleRepetition_count", C::list_lookup, T::novel, 1},
        {"titleRepetition_relative", C::list_lookup, T::novel, 1},
        {"wordsPerParagraph_mean", C::document, T::traditional, 1},
        {"wordsPerParagraph_stdev", C::document, T::traditional, 1},
        {"sentencesPerParagraph_mean", C::document, T::traditional, 1},
        {"sentencesPerParagraph_stdev", C::document, T::traditional, 1},
        {"wordsPerSentence_mean", C::document, T::traditional, 1},
        {"wordsPerSentence_stdev", C::document, T::traditional, 1},
        {"uniqWordsPerSentence_mean", C::document, T::traditional, 1},
        {"uniqWordsPerSentence_stdev", C::document, T::novel, 1},
        {"words_count", C::document, T::traditional, 1},
        {"uniqWords_count", C::document, T::traditional, 1},
        {"uniqWords_relative", C::document, T::traditional, 1},
        {"paragraph_count", C::document, T::traditional, 1},
        {"sentence_count", C::document, T::traditional, 1},
        {"punctuation_count", C::document, T::traditional, 1},
        {"quotation_count", C::document, T::novel, 1},
        {"character_count", C::document, T::traditional, 1},
        {"uppercaseWords_relative", C::document, T::traditional, 1},
        {"personalPronoun_count", C::document, T::traditional, 1},
        {"personalPronoun_relative", C::document, T::traditional, 1},
        {"POSPerSentence_mean", C::document, T::traditional, 1},
        {"grammarError_count", C::error_based, T::novel, 1},
        {"multiBlank_count", C::error_based, T::novel, 1},
        {"fleschReadingEase", C::readability, T::traditional, 1},
        {"fleschKincaidGradeLevel", C::readability, T::traditional, 1},
        {"AIFeedback", C::ai_feedback, T::novel, 1},
        {"tfidf", C::text_vector, T::traditional, tfidf_terms},
        {"sentenceVector", C::text_vector, T::traditional, embedding_dim},
        {"sentenceVector_dist", C::text_vector, T::novel, 1},
    };
    return FeatureSchema(std::move(d));
}

size_t FeatureSchema::total_arity() const {
    size_t n = 0;
    for (const auto& d : descriptors_) n += d.arity;
    return n;
}

std::vector<std::string> FeatureSchema::column_names() const {
    std::vector<std::string> names;
    names.reserve(total_arity());
    for (const auto& d : descriptors_) {
        if (d.arity == 1) {
            names.push_back(d.name);
        } else {
            for (size_t i = 0; i < d.arity; ++i) names.push_back(d.name + "_" + std::to_string(i));
        }
    }
    return names;
}

const FeatureDescriptor* FeatureSchema::find(const std::string& name) const {
    for (const auto& d : descriptors_)
        if (d.name == name) return &d;
    return nullptr;
}

bool Selection::admits(const FeatureDescriptor& d) const {
    if (!categories.count(d.category)) return false;
    return d.tag == Tag::traditional ? keep_traditional : keep_novel;
}

const std::vector<std::string>& selection_preset_names() {
    static const std::vector<std::string> names{
        "Perplexity_traditional",
        "Semantic_traditional",
        "Semantic_traditional+new",
        "ListLookup_traditional",
        "ListLookup_traditional+new",
        "Document_traditional",
        "Document_traditional+new",
        "ErrorBased_new",
        "Readability_traditional",
        "AIFeedback_new",
        "TextVector_traditional",
        "TextVector_traditional+new",
        "All_traditional",
        "All_traditional+new",
    };
    return names;
}

Selection selection_from_name(const std::string& name) {
    bool known = false;
    for (const auto& n : selection_preset_names())
        if (n == name) known = true;
    if (!known)
        throw std::invalid_argument("unknown feature selection: " + name +
                                    " (expected one of the named presets, e.g. All_traditional+new)");

    auto us = name.rfind('_');
    std::string group = name.substr(0, us);
    std::string tags = name.substr(us + 1);

    Selection sel;
    sel.name = name;
    sel.keep_traditional = tags == "traditional" || tags == "traditional+new";
    sel.keep_novel = tags == "new" || tags == "traditional+new";

    using C = Category;
    if (group == "Perplexity") sel.categories = {C::perplexity};
    else if (group == "Semantic") sel.categories = {C::semantic};
    else if (group == "ListLookup") sel.categories = {C::list_lookup};
    else if (group == "Document") sel.categories = {C::document};
    else if (group == "ErrorBased") sel.categories = {C::error_based};
    else if (group == "Readability") sel.categories = {C::readability};
    else if (group == "AIFeedback") sel.categories = {C::ai_feedback};
    else if (group == "TextVector") sel.categories = {C::text_vector};
    else
        sel.categories = {C::perplexity, C::semantic,   C::list_lookup, C::document,
                          C::error_based, C::readability, C::ai_feedback, C::text_vector};
    return sel;
}

FeatureSchema subset(const FeatureSchema& schema, const Selection& sel) {
    std::vector<FeatureDescriptor> kept;
    for (const auto& d : schema.descriptors())
        if (sel.admits(d)) kept.push_back(d);
    return FeatureSchema(std::move(kept));
}

// ---------------------------------------------------------------------------
// Validation and export

namespace {

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

bool is_integral(double v) { return std::floor(v) == v; }

std::string format_value(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, p);
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

} // namespace

std::vector<std::string> range_violations(const FeatureVector& fv) {
    std::vector<std::string> bad;
    if (fv.names.size() != fv.values.size()) {
        bad.push_back("names/values length mismatch");
        return bad;
    }
    for (size_t i = 0; i < fv.names.size(); ++i) {
        const std::string& name = fv.names[i];
        double v = fv.values[i];
        if (!std::isfinite(v)) {
            bad.push_back(name + ": not finite");
            continue;
        }
        if (ends_with(name, "_count")) {
            if (v < 0 || !is_integral(v)) bad.push_back(name + ": count must be a non-negative integer");
        } else if (ends_with(name, "_relative")) {
            if (v < 0 || v > 1) bad.push_back(name + ": relative value outside [0,1]");
        }
        if (name == "sentiment_polarity" && (v < -1 || v > 1))
            bad.push_back(name + ": polarity outside [-1,1]");
        if (name == "sentiment_subjectivity" && (v < 0 || v > 1))
            bad.push_back(name + ": subjectivity outside [0,1]");
        if (name == "AIFeedback" && v != 0 && v != 1 && v != 2)
            bad.push_back(name + ": value outside {0,1,2}");
        if ((name == "PPL_mean" || name == "PPL_max") && v < 1)
            bad.push_back(name + ": perplexity below 1");
    }
    return bad;
}

std::string feature_matrix_csv(const std::vector<FeatureVector>& rows,
                               const std::vector<std::string>& ids,
                               const std::vector<int>& labels) {
    if (rows.size() != ids.size() || rows.size() != labels.size())
        throw std::invalid_argument("feature rows, ids, and labels must have equal lengths");
    std::string out;
    if (rows.empty()) return out;
    const auto& names = rows.front().names;
    for (const auto& n : names) {
        out += csv_escape(n);
        out += ',';
    }
    out += "id,label\n";
    for (size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].names != names)
            throw std::invalid_argument("feature rows disagree on columns at row " + std::to_string(r));
        for (double v : rows[r].values) {
            out += format_value(v);
            out += ',';
        }
        out += csv_escape(ids[r]);
        out += ',';
        out += std::to_string(labels[r]);
        out += '\n';
    }
    return out;
}

std::string schema_json(const FeatureSchema& schema) {
    ojson j;
    j["features"] = ojson::array();
    for (const auto& d : schema.descriptors()) {
        ojson f;
        f["name"] = d.name;
        f["category"] = to_string(d.category);
        f["tag"] = to_string(d.tag);
        f["arity"] = d.arity;
        j["features"].push_back(f);
    }
    j["total_arity"] = schema.total_arity();
    return j.dump(2) + "\n";
}

} // namespace stylo::fea
