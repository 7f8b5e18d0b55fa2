#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace stylo::text {

class LexiconSet;

// Coarse universal tagset.
enum class PosTag { NOUN, VERB, ADJ, ADV, PRON, DET, ADP, NUM, CONJ, PRT, PUNCT, X };

const char* pos_tag_name(PosTag t);
PosTag pos_tag_from_name(const std::string& name);  // throws on unknown

struct Token {
    std::string surface;
    std::string folded;   // ASCII-casefolded surface
    size_t begin = 0;     // byte span into the source text
    size_t end = 0;
    bool is_word = false; // false => punctuation/symbol token
    PosTag pos = PosTag::X;
};

struct Sentence {
    std::vector<Token> tokens;
    size_t word_count() const;
    size_t begin = 0;
    size_t end = 0;
};

struct Paragraph {
    std::vector<Sentence> sentences;
    size_t begin = 0;
    size_t end = 0;
};

// Paragraph -> sentence -> token decomposition of one document.
// Token byte spans index into `source`, strictly increasing and
// non-overlapping; the text between consecutive spans is whitespace.
struct StructuredText {
    std::string source;
    std::vector<Paragraph> paragraphs;

    size_t sentence_count() const;
    size_t word_count() const;
    size_t punct_token_count() const;

    template <typename Fn>
    void for_each_sentence(Fn&& fn) const {
        for (const auto& p : paragraphs)
            for (const auto& s : p.sentences) fn(s);
    }
    template <typename Fn>
    void for_each_token(Fn&& fn) const {
        for (const auto& p : paragraphs)
            for (const auto& s : p.sentences)
                for (const auto& t : s.tokens) fn(t);
    }
};

// Splits paragraphs on blank lines, sentences on {. ! ?} followed by
// whitespace and an uppercase letter or digit (with a bundled abbreviation
// exception list), tokens on whitespace/punctuation boundaries with
// punctuation kept as tokens. Word-internal apostrophes do not split.
// Throws std::invalid_argument on empty text.
StructuredText structure(const std::string& text);

// Maximal aeiouy groups, minus a silent final 'e' (kept when a consonant
// precedes a final "le"), floor 1. Throws if `word` has no letter.
int count_syllables(const std::string& word);

// Lexicon lookup first, then digit/suffix heuristics, PUNCT for non-words,
// X as last resort.
std::vector<PosTag> pos_tag(const std::vector<Token>& sentence_tokens, const LexiconSet& lex);

// Tags every sentence of `doc` in place.
void annotate_pos(StructuredText& doc, const LexiconSet& lex);

} // namespace stylo::text
