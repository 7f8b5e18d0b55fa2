#include "stylodetect/vectorize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

#include "stylodetect/textproc.hpp"
#include "stylodetect/util.hpp"

using json = nlohmann::ordered_json;

namespace stylo::vec {

std::vector<std::string> word_ngrams(const text::StructuredText& doc) {
    std::vector<std::string> grams;
    doc.for_each_sentence([&](const text::Sentence& s) {
        std::vector<const std::string*> words;
        for (const auto& t : s.tokens)
            if (t.is_word) words.push_back(&t.folded);
        for (const auto* w : words) grams.push_back(*w);
        for (size_t i = 0; i + 1 < words.size(); ++i)
            grams.push_back(*words[i] + " " + *words[i + 1]);
    });
    return grams;
}

std::vector<std::string> word_ngrams(const std::string& body) {
    if (trim(body).empty()) return {};
    return word_ngrams(text::structure(body));
}

TfidfModel TfidfModel::fit(const std::vector<std::string>& train_docs, size_t max_terms,
                           const std::string& fingerprint) {
    if (train_docs.size() < 2)
        throw std::invalid_argument("tfidf fit needs at least 2 documents, got " +
                                    std::to_string(train_docs.size()));
    std::unordered_map<std::string, size_t> df;
    for (const auto& body : train_docs) {
        auto grams = word_ngrams(body);
        std::sort(grams.begin(), grams.end());
        grams.erase(std::unique(grams.begin(), grams.end()), grams.end());
        for (const auto& g : grams) ++df[g];
    }

    std::vector<std::pair<std::string, size_t>> terms(df.begin(), df.end());
    std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (terms.size() > max_terms) terms.resize(max_terms);

    TfidfModel m;
    m.fitted_on_ = fingerprint;
    const double n = static_cast<double>(train_docs.size());
    for (const auto& [term, freq] : terms) {
        m.vocabulary_.push_back(term);
        m.idf_.push_back(std::log((1.0 + n) / (1.0 + static_cast<double>(freq))) + 1.0);
    }
    return m;
}

std::vector<double> TfidfModel::transform(const std::string& body) const {
    std::vector<double> out(vocabulary_.size(), 0.0);
    if (trim(body).empty()) return out;
    return transform(text::structure(body));
}

std::vector<double> TfidfModel::transform(const text::StructuredText& doc) const {
    std::vector<double> out(vocabulary_.size(), 0.0);
    std::unordered_map<std::string, size_t> index;
    index.reserve(vocabulary_.size());
    for (size_t i = 0; i < vocabulary_.size(); ++i) index[vocabulary_[i]] = i;
    for (const auto& g : word_ngrams(doc)) {
        auto it = index.find(g);
        if (it != index.end()) out[it->second] += 1.0;
    }
    double norm2 = 0.0;
    for (size_t i = 0; i < out.size(); ++i) {
        out[i] *= idf_[i];
        norm2 += out[i] * out[i];
    }
    if (norm2 > 0.0) {
        double inv = 1.0 / std::sqrt(norm2);
        for (auto& v : out) v *= inv;
    }
    return out;
}

std::string TfidfModel::to_json() const {
    json j;
    j["format"] = "stylo-tfidf";
    j["version"] = 1;
    j["fitted_on"] = fitted_on_;
    j["vocabulary"] = vocabulary_;
    j["idf"] = idf_;
    return j.dump();
}

TfidfModel TfidfModel::from_json(const std::string& json_text) {
    json j = json::parse(json_text);
    if (j.value("format", "") != "stylo-tfidf") throw std::runtime_error("not a tf-idf model");
    TfidfModel m;
    m.fitted_on_ = j.at("fitted_on").get<std::string>();
    m.vocabulary_ = j.at("vocabulary").get<std::vector<std::string>>();
    m.idf_ = j.at("idf").get<std::vector<double>>();
    if (m.vocabulary_.size() != m.idf_.size())
        throw std::runtime_error("tf-idf model arrays disagree in length");
    return m;
}

std::vector<std::vector<double>> HashedEmbedder::embed(
    const std::vector<std::string>& sentences) const {
    std::vector<std::vector<double>> out;
    out.reserve(sentences.size());
    for (const auto& sent : sentences) {
        std::vector<double> v(dim_, 0.0);
        for (const auto& g : word_ngrams(sent)) {
            uint64_t h = fnv1a64(g);
            size_t idx = static_cast<size_t>((h >> 1) % dim_);
            v[idx] += (h & 1) ? 1.0 : -1.0;
        }
        double norm2 = 0.0;
        for (double x : v) norm2 += x * x;
        if (norm2 > 0.0) {
            double inv = 1.0 / std::sqrt(norm2);
            for (auto& x : v) x *= inv;
        }
        out.push_back(std::move(v));
    }
    return out;
}

double cosine_distance(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("cosine_distance: dimension mismatch");
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na <= 0.0 || nb <= 0.0) return 0.0;
    return 1.0 - dot / (std::sqrt(na) * std::sqrt(nb));
}

EmbeddingBlock embed_sentences(const SentenceEmbedder& provider, const text::StructuredText& doc) {
    std::vector<std::string> sentences;
    doc.for_each_sentence([&](const text::Sentence& s) {
        sentences.push_back(trim(std::string_view(doc.source).substr(s.begin, s.end - s.begin)));
    });
    if (sentences.empty()) throw std::invalid_argument("embed_sentences: document has no sentences");

    EmbeddingBlock block;
    try {
        block.sentence_vectors = provider.embed(sentences);
    } catch (const std::exception& batch_error) {
        // find the offender so the error names a sentence index
        for (size_t i = 0; i < sentences.size(); ++i) {
            try {
                provider.embed({sentences[i]});
            } catch (const std::exception& e) {
                throw std::runtime_error("embedding failed at sentence " + std::to_string(i) +
                                         ": " + e.what());
            }
        }
        throw std::runtime_error(std::string("embedding batch failed: ") + batch_error.what());
    }
    if (block.sentence_vectors.size() != sentences.size())
        throw std::runtime_error("embedding provider returned " +
                                 std::to_string(block.sentence_vectors.size()) + " vectors for " +
                                 std::to_string(sentences.size()) + " sentences");
    const size_t d = provider.dim();
    for (size_t i = 0; i < block.sentence_vectors.size(); ++i) {
        if (block.sentence_vectors[i].size() != d)
            throw std::runtime_error("embedding dimension mismatch at sentence " +
                                     std::to_string(i));
    }

    const double s = static_cast<double>(block.sentence_vectors.size());
    block.doc_mean.assign(d, 0.0);
    for (const auto& v : block.sentence_vectors)
        for (size_t i = 0; i < d; ++i) block.doc_mean[i] += v[i];
    double norm2 = 0.0;
    for (auto& x : block.doc_mean) {
        x /= s;
        norm2 += x * x;
    }
    double dist_sum = 0.0;
    for (const auto& v : block.sentence_vectors) dist_sum += cosine_distance(v, block.doc_mean);
    block.mean_distance = dist_sum / s;
    if (norm2 > 0.0) {
        double inv = 1.0 / std::sqrt(norm2);
        for (auto& x : block.doc_mean) x *= inv;
    }
    return block;
}

} // namespace stylo::vec
