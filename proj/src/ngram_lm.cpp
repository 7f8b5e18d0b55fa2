#include "stylodetect/ngram_lm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "stylodetect/textproc.hpp"
#include "stylodetect/util.hpp"

using json = nlohmann::ordered_json;

namespace stylo::lm {

namespace {

constexpr const char* kUnk = "<unk>";
constexpr const char* kBos = "<s>";
constexpr const char* kEos = "</s>";

// Context ids are packed +1 so that 0 never collides with a real id; the
// out-of-vocabulary phantom id (-1) packs to 0 and misses every table.
uint64_t pack_ctx(const int32_t* ids, size_t len) {
    uint64_t key = 0;
    for (size_t i = 0; i < len; ++i)
        key = (key << 32) | static_cast<uint32_t>(ids[i] + 1);
    return key;
}

std::vector<std::vector<std::string>> sentence_words(const std::string& text) {
    std::vector<std::vector<std::string>> out;
    auto doc = text::structure(text);
    doc.for_each_sentence([&](const text::Sentence& s) {
        std::vector<std::string> words;
        for (const auto& t : s.tokens)
            if (t.is_word) words.push_back(t.folded);
        if (!words.empty()) out.push_back(std::move(words));
    });
    return out;
}

} // namespace

int32_t NGramModel::word_id(const std::string& folded) const {
    auto it = vocab_index_.find(folded);
    if (it != vocab_index_.end()) return it->second;
    return unk_id_; // -1 when the model has no <unk>
}

NGramModel NGramModel::train(const std::vector<std::string>& reference_texts,
                             const TrainOptions& opts) {
    if (opts.order < 1 || opts.order > 3)
        throw std::invalid_argument("n-gram order must be 1..3, got " +
                                    std::to_string(opts.order));

    std::vector<std::vector<std::string>> sentences;
    std::unordered_map<std::string, size_t> word_freq;
    size_t total_tokens = 0;
    for (const auto& text : reference_texts) {
        for (auto& words : sentence_words(text)) {
            for (const auto& w : words) {
                ++word_freq[w];
                ++total_tokens;
            }
            sentences.push_back(std::move(words));
        }
    }
    if (total_tokens < opts.min_tokens)
        throw std::invalid_argument("reference corpus too small: " + std::to_string(total_tokens) +
                                    " tokens < " + std::to_string(opts.min_tokens));

    NGramModel m;
    m.order_ = opts.order;
    m.smoothing_ = opts.smoothing;
    m.add_k_ = opts.add_k;
    m.discount_ = opts.discount;

    std::set<std::string> vocab_set;
    for (const auto& [w, c] : word_freq)
        if (opts.unk_threshold == 0 || c >= opts.unk_threshold) vocab_set.insert(w);
    if (opts.unk_threshold >= 1) vocab_set.insert(kUnk);
    if (opts.order >= 2) vocab_set.insert(kEos);
    m.vocab_.assign(vocab_set.begin(), vocab_set.end());
    for (size_t i = 0; i < m.vocab_.size(); ++i)
        m.vocab_index_[m.vocab_[i]] = static_cast<int32_t>(i);
    if (auto it = m.vocab_index_.find(kUnk); it != m.vocab_index_.end()) m.unk_id_ = it->second;
    if (auto it = m.vocab_index_.find(kEos); it != m.vocab_index_.end()) m.end_id_ = it->second;

    const int32_t bos = static_cast<int32_t>(m.vocab_.size());
    m.raw_.assign(opts.order, {});
    for (const auto& words : sentences) {
        std::vector<int32_t> events;
        for (const auto& w : words) events.push_back(m.word_id(w));
        if (opts.order >= 2) events.push_back(m.end_id_);
        for (int level = 0; level < opts.order; ++level) {
            // sequence = [bos x level] + events; context = `level` ids
            std::vector<int32_t> seq(static_cast<size_t>(level), bos);
            seq.insert(seq.end(), events.begin(), events.end());
            auto& table = m.raw_[level];
            for (size_t i = level; i < seq.size(); ++i) {
                uint64_t key = pack_ctx(seq.data() + i - level, level);
                auto& row = table[key];
                row.count[seq[i]] += 1.0;
                row.total += 1.0;
            }
        }
    }
    m.build_tables();
    return m;
}

NGramModel NGramModel::uniform(const std::vector<std::string>& vocab) {
    if (vocab.empty()) throw std::invalid_argument("uniform model needs a non-empty vocabulary");
    NGramModel m;
    m.uniform_ = true;
    m.order_ = 1;
    std::set<std::string> vocab_set;
    for (const auto& w : vocab) vocab_set.insert(casefold(w));
    m.vocab_.assign(vocab_set.begin(), vocab_set.end());
    for (size_t i = 0; i < m.vocab_.size(); ++i)
        m.vocab_index_[m.vocab_[i]] = static_cast<int32_t>(i);
    return m;
}

// Kneser-Ney scoring tables: the top level keeps raw counts, each lower
// level (ctx, w) holds the number of distinct extensions v with
// raw(v ctx, w) > 0.
void NGramModel::build_tables() {
    if (uniform_) return;
    eff_ = raw_;
    for (int level = order_ - 2; level >= 0; --level) {
        auto& table = eff_[level];
        table.clear();
        for (const auto& [key, row] : raw_[level + 1]) {
            uint64_t suffix_key = level == 0 ? 0 : key & ((uint64_t(1) << (32 * level)) - 1);
            for (const auto& [w, c] : row.count) {
                if (c <= 0) continue;
                auto& out = table[suffix_key];
                out.count[w] += 1.0;
                out.total += 1.0;
            }
        }
    }
}

double NGramModel::level_prob(int level, uint64_t ctx_key, int32_t word,
                              const std::vector<int32_t>& context) const {
    const double V = static_cast<double>(vocab_.size());
    const auto& table = eff_[level];
    auto it = table.find(ctx_key);
    if ((it == table.end() || it->second.total <= 0) && level > 0) {
        uint64_t suffix = pack_ctx(context.data() + (context.size() - (level - 1)),
                                   static_cast<size_t>(level - 1));
        return level_prob(level - 1, suffix, word, context);
    }
    double c = 0, total = 0, distinct = 0;
    if (it != table.end()) {
        total = it->second.total;
        distinct = static_cast<double>(it->second.count.size());
        if (auto cit = it->second.count.find(word); cit != it->second.count.end()) c = cit->second;
    }
    if (total <= 0) return 1.0 / V; // no unigram data at all
    double lower;
    if (level == 0) {
        lower = 1.0 / V;
    } else {
        uint64_t suffix = pack_ctx(context.data() + (context.size() - (level - 1)),
                                   static_cast<size_t>(level - 1));
        lower = level_prob(level - 1, suffix, word, context);
    }
    return (std::max(c - discount_, 0.0) + discount_ * distinct * lower) / total;
}

double NGramModel::prob_ids(int32_t word, const std::vector<int32_t>& context) const {
    if (uniform_) return 1.0 / static_cast<double>(vocab_.size());
    const double V = static_cast<double>(vocab_.size());
    int level = std::min<int>(static_cast<int>(context.size()), order_ - 1);
    uint64_t key = pack_ctx(context.data() + (context.size() - level), static_cast<size_t>(level));

    if (smoothing_ == Smoothing::add_k) {
        double c = 0, ctx_total = 0;
        auto it = raw_[level].find(key);
        if (it != raw_[level].end()) {
            ctx_total = it->second.total;
            if (auto cit = it->second.count.find(word); cit != it->second.count.end())
                c = cit->second;
        }
        return (c + add_k_) / (ctx_total + add_k_ * V);
    }
    return level_prob(level, key, word, context);
}

double NGramModel::prob(const std::string& word, const std::vector<std::string>& context) const {
    if (uniform_) return 1.0 / static_cast<double>(vocab_.size());
    const int32_t bos = static_cast<int32_t>(vocab_.size());
    std::vector<int32_t> ctx;
    for (const auto& c : context) {
        std::string f = casefold(c);
        ctx.push_back(f == kBos ? bos : word_id(f));
    }
    return prob_ids(word_id(casefold(word)), ctx);
}

double NGramModel::sentence_perplexity(const std::vector<std::string>& words) const {
    if (words.empty()) throw std::invalid_argument("sentence_perplexity: empty sentence");
    if (uniform_) return static_cast<double>(vocab_.size());

    const int32_t bos = static_cast<int32_t>(vocab_.size());
    std::vector<int32_t> events;
    for (const auto& w : words) events.push_back(word_id(casefold(w)));
    if (order_ >= 2) events.push_back(end_id_);

    std::vector<int32_t> history(static_cast<size_t>(order_ - 1), bos);
    double log_sum = 0.0;
    for (int32_t ev : events) {
        log_sum += std::log(prob_ids(ev, history));
        if (order_ >= 2) {
            history.erase(history.begin());
            history.push_back(ev);
        }
    }
    return std::exp(-log_sum / static_cast<double>(events.size()));
}

std::string NGramModel::to_json() const {
    json j;
    j["format"] = "stylo-ngram";
    j["version"] = 1;
    j["order"] = order_;
    j["smoothing"] =
        smoothing_ == Smoothing::interpolated_kneser_ney ? "interpolated_kneser_ney" : "add_k";
    j["add_k"] = add_k_;
    j["discount"] = discount_;
    j["uniform"] = uniform_;
    j["vocab"] = vocab_;
    json levels = json::array();
    for (int level = 0; level < static_cast<int>(raw_.size()); ++level) {
        std::vector<std::array<int64_t, 4>> entries; // ctx ids (-1 padded), word, count
        for (const auto& [key, row] : raw_[level]) {
            int64_t c0 = -1, c1 = -1;
            if (level == 1) c0 = static_cast<int64_t>(key) - 1;
            if (level == 2) {
                c0 = static_cast<int64_t>(key >> 32) - 1;
                c1 = static_cast<int64_t>(key & 0xFFFFFFFFull) - 1;
            }
            for (const auto& [w, c] : row.count)
                entries.push_back({c0, c1, w, static_cast<int64_t>(c)});
        }
        std::sort(entries.begin(), entries.end());
        json larr = json::array();
        for (const auto& e : entries) larr.push_back(e);
        levels.push_back(std::move(larr));
    }
    j["counts"] = std::move(levels);
    return j.dump();
}

NGramModel NGramModel::from_json(const std::string& json_text) {
    json j = json::parse(json_text);
    if (j.value("format", "") != "stylo-ngram")
        throw std::runtime_error("not an n-gram model file");
    NGramModel m;
    m.order_ = j.at("order").get<int>();
    m.smoothing_ = j.at("smoothing").get<std::string>() == "add_k"
                       ? Smoothing::add_k
                       : Smoothing::interpolated_kneser_ney;
    m.add_k_ = j.at("add_k").get<double>();
    m.discount_ = j.at("discount").get<double>();
    m.uniform_ = j.at("uniform").get<bool>();
    m.vocab_ = j.at("vocab").get<std::vector<std::string>>();
    for (size_t i = 0; i < m.vocab_.size(); ++i)
        m.vocab_index_[m.vocab_[i]] = static_cast<int32_t>(i);
    if (auto it = m.vocab_index_.find(kUnk); it != m.vocab_index_.end()) m.unk_id_ = it->second;
    if (auto it = m.vocab_index_.find(kEos); it != m.vocab_index_.end()) m.end_id_ = it->second;
    const auto& levels = j.at("counts");
    m.raw_.assign(levels.size(), {});
    for (size_t level = 0; level < levels.size(); ++level) {
        for (const auto& e : levels[level]) {
            auto arr = e.get<std::array<int64_t, 4>>();
            int32_t ids[2] = {static_cast<int32_t>(arr[0]), static_cast<int32_t>(arr[1])};
            uint64_t key = 0;
            if (level == 1) key = pack_ctx(ids, 1);
            if (level == 2) key = pack_ctx(ids, 2);
            auto& row = m.raw_[level][key];
            row.count[static_cast<int32_t>(arr[2])] += static_cast<double>(arr[3]);
            row.total += static_cast<double>(arr[3]);
        }
    }
    m.build_tables();
    return m;
}

void NGramModel::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write model: " + path);
    out << to_json();
    if (!out) throw std::runtime_error("write failed: " + path);
}

NGramModel NGramModel::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read model: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return from_json(buf.str());
}

PerplexityFeatures perplexity_features(const SentenceScorer& scorer,
                                       const text::StructuredText& doc) {
    std::vector<std::vector<std::string>> sentences;
    doc.for_each_sentence([&](const text::Sentence& s) {
        std::vector<std::string> words;
        for (const auto& t : s.tokens)
            if (t.is_word) words.push_back(t.folded);
        if (!words.empty()) sentences.push_back(std::move(words));
    });

    PerplexityFeatures out;
    if (sentences.empty()) return out;
    double sum = 0.0, max = 0.0;
    for (size_t i = 0; i < sentences.size(); ++i) {
        double ppl;
        try {
            ppl = scorer.sentence_perplexity(sentences[i]);
        } catch (const std::exception& e) {
            throw std::runtime_error("perplexity scoring failed at sentence " + std::to_string(i) +
                                     ": " + e.what());
        }
        sum += ppl;
        max = std::max(max, ppl);
    }
    out.ppl_mean = sum / static_cast<double>(sentences.size());
    out.ppl_max = max;
    return out;
}

} // namespace stylo::lm
