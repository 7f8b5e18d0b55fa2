#pragma once

#include <map>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "stylodetect/textproc.hpp"

namespace stylo::text {

struct SentimentEntry {
    double polarity = 0.0;     // [-1, 1]
    double subjectivity = 0.0; // [0, 1]
};

// Shared word lists, loaded once from plain-text files and immutable after.
// Every entry is stored casefolded. File content hashes go into run
// provenance so reports pin the exact lexicon version.
class LexiconSet {
public:
    std::unordered_set<std::string> stop_words;
    std::vector<std::vector<std::string>> discourse_markers; // tokenized phrases
    std::unordered_set<std::string> personal_pronouns;
    std::unordered_map<std::string, SentimentEntry> sentiment;
    std::unordered_set<std::string> negators;
    std::unordered_map<std::string, PosTag> pos_lexicon;
    std::unordered_set<std::string> spelling_dictionary;

    // filename -> sha256 of file bytes
    std::map<std::string, std::string> content_hashes;

    bool is_stop_word(const std::string& folded) const { return stop_words.count(folded) > 0; }
    bool in_dictionary(const std::string& folded) const { return spelling_dictionary.count(folded) > 0; }

    // Loads all lexicon files from `dir`; throws on a missing file or a
    // sentiment entry outside its range.
    static LexiconSet load(const std::string& dir);

    // The data/ directory shipped with the project ($STYLO_DATA_DIR overrides).
    static const LexiconSet& bundled();
    static std::string bundled_dir();
};

} // namespace stylo::text
