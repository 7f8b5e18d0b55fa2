#include "stylodetect/lexicon.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "stylodetect/sha256.hpp"
#include "stylodetect/util.hpp"

namespace stylo::text {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("lexicon: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// One entry per line, '#' starts a comment.
template <typename Fn>
void parse_lines(const std::string& content, const std::string& path, Fn&& fn) {
    size_t lineno = 0;
    for (const auto& raw : split(content, '\n')) {
        ++lineno;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        fn(line, lineno);
    }
    (void)path;
}

} // namespace

LexiconSet LexiconSet::load(const std::string& dir) {
    LexiconSet lex;
    auto slurp = [&](const char* name) {
        std::string content = read_file(dir + "/" + name);
        lex.content_hashes[name] = sha256_hex(content);
        return content;
    };

    parse_lines(slurp("stopwords.txt"), "stopwords.txt",
                [&](const std::string& line, size_t) { lex.stop_words.insert(casefold(line)); });

    parse_lines(slurp("discourse_markers.txt"), "discourse_markers.txt",
                [&](const std::string& line, size_t) {
                    std::vector<std::string> phrase;
                    for (auto& w : split(casefold(line), ' '))
                        if (!w.empty()) phrase.push_back(w);
                    if (!phrase.empty()) lex.discourse_markers.push_back(std::move(phrase));
                });

    parse_lines(slurp("personal_pronouns.txt"), "personal_pronouns.txt",
                [&](const std::string& line, size_t) { lex.personal_pronouns.insert(casefold(line)); });

    parse_lines(slurp("negators.txt"), "negators.txt",
                [&](const std::string& line, size_t) { lex.negators.insert(casefold(line)); });

    parse_lines(slurp("sentiment_lexicon.tsv"), "sentiment_lexicon.tsv",
                [&](const std::string& line, size_t lineno) {
                    auto cols = split(line, '\t');
                    if (cols.size() != 3)
                        throw std::runtime_error("sentiment_lexicon.tsv:" + std::to_string(lineno) +
                                                 ": expected word<TAB>polarity<TAB>subjectivity");
                    SentimentEntry e;
                    e.polarity = std::stod(cols[1]);
                    e.subjectivity = std::stod(cols[2]);
                    if (e.polarity < -1.0 || e.polarity > 1.0 || e.subjectivity < 0.0 ||
                        e.subjectivity > 1.0)
                        throw std::runtime_error("sentiment_lexicon.tsv:" + std::to_string(lineno) +
                                                 ": value out of range");
                    lex.sentiment[casefold(trim(cols[0]))] = e;
                });

    parse_lines(slurp("pos_lexicon.tsv"), "pos_lexicon.tsv",
                [&](const std::string& line, size_t lineno) {
                    auto cols = split(line, '\t');
                    if (cols.size() != 2)
                        throw std::runtime_error("pos_lexicon.tsv:" + std::to_string(lineno) +
                                                 ": expected word<TAB>TAG");
                    lex.pos_lexicon[casefold(trim(cols[0]))] = pos_tag_from_name(trim(cols[1]));
                });

    parse_lines(slurp("spelling_words.txt"), "spelling_words.txt",
                [&](const std::string& line, size_t) { lex.spelling_dictionary.insert(casefold(line)); });

    return lex;
}

std::string LexiconSet::bundled_dir() {
    if (const char* env = std::getenv("STYLO_DATA_DIR"); env && *env) return env;
#ifdef STYLO_BUNDLED_DATA_DIR
    return STYLO_BUNDLED_DATA_DIR;
#else
    return "data";
#endif
}

const LexiconSet& LexiconSet::bundled() {
    static const LexiconSet lex = load(bundled_dir());
    return lex;
}

} // namespace stylo::text
