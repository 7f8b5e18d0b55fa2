#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace stylo::text {
struct StructuredText;
}

namespace stylo::lm {

enum class Smoothing { interpolated_kneser_ney, add_k };

struct TrainOptions {
    int order = 3; // 1..3
    Smoothing smoothing = Smoothing::interpolated_kneser_ney;
    double add_k = 1.0;     // pseudo-count for Smoothing::add_k
    double discount = 0.75; // absolute discount for Kneser-Ney
    // Words seen fewer than this many times map to <unk>; 0 keeps every word
    // and omits <unk> from the vocabulary.
    unsigned unk_threshold = 2;
    size_t min_tokens = 1000; // training rejects smaller reference corpora
};

// Anything that can score one sentence (a list of word tokens) with a
// perplexity. Implemented by NGramModel and by the external provider in the
// clients module.
class SentenceScorer {
public:
    virtual ~SentenceScorer() = default;
    virtual double sentence_perplexity(const std::vector<std::string>& words) const = 0;
};

// Word n-gram model (order 1..3). Orders >= 2 pad sentences with <s> and
// predict a closing </s>; the vocabulary holds predictable events only
// (words, optionally <unk>, and </s>), never <s>. Order-1 models use bare
// word sequences with no boundary symbols. Immutable once trained; scoring
// is pure and safe to call concurrently.
class NGramModel : public SentenceScorer {
public:
    // Segments each reference text, casefolds word tokens, and counts
    // n-grams per sentence. Throws std::invalid_argument on an order outside
    // 1..3 or a reference below opts.min_tokens tokens.
    static NGramModel train(const std::vector<std::string>& reference_texts,
                            const TrainOptions& opts = {});

    // Model assigning p = 1/|vocab| to every token; any sentence scores a
    // perplexity of exactly |vocab|.
    static NGramModel uniform(const std::vector<std::string>& vocab);

    // p(word | context); context is the preceding words (longer histories
    // are truncated to order-1 words, shorter ones back off). Out-of-
    // vocabulary words map to <unk> when present. Always > 0.
    double prob(const std::string& word, const std::vector<std::string>& context) const;

    // exp(-(1/n) sum ln p), n = scored events including </s> at order >= 2.
    double sentence_perplexity(const std::vector<std::string>& words) const override;

    int order() const { return order_; }
    size_t vocab_size() const { return vocab_.size(); }
    const std::vector<std::string>& vocabulary() const { return vocab_; }
    bool has_unk() const { return unk_id_ >= 0; }

    std::string to_json() const;
    static NGramModel from_json(const std::string& json_text);
    void save(const std::string& path) const;
    static NGramModel load(const std::string& path);

private:
    NGramModel() = default;
    void build_tables();
    double prob_ids(int32_t word, const std::vector<int32_t>& context) const;
    double level_prob(int level, uint64_t ctx_key, int32_t word,
                      const std::vector<int32_t>& context) const;
    int32_t word_id(const std::string& folded) const;

    struct Row {
        double total = 0;
        std::unordered_map<int32_t, double> count;
    };

    int order_ = 1;
    Smoothing smoothing_ = Smoothing::interpolated_kneser_ney;
    double add_k_ = 1.0;
    double discount_ = 0.75;
    bool uniform_ = false;

    std::vector<std::string> vocab_; // predictable events, sorted
    std::unordered_map<std::string, int32_t> vocab_index_;
    int32_t unk_id_ = -1;
    int32_t end_id_ = -1; // </s>, orders >= 2

    // raw_[n-1]: context (n-1 words) -> next-word counts, as observed
    std::vector<std::unordered_map<uint64_t, Row>> raw_;
    // eff_[n-1]: scoring tables; top level raw counts, lower levels
    // continuation counts (Kneser-Ney); unused for add_k
    std::vector<std::unordered_map<uint64_t, Row>> eff_;
};

struct PerplexityFeatures {
    double ppl_mean = 1.0;
    double ppl_max = 1.0;
};

// Mean and max of per-sentence perplexities over every sentence of `doc`
// that contains at least one word token. Provider errors are rethrown with
// the sentence index attached.
PerplexityFeatures perplexity_features(const SentenceScorer& scorer,
                                       const text::StructuredText& doc);

} // namespace stylo::lm
