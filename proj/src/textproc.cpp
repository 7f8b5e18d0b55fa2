#include "stylodetect/textproc.hpp"

#include <array>
#include <stdexcept>
#include <unordered_set>

#include "stylodetect/lexicon.hpp"
#include "stylodetect/util.hpp"

namespace stylo::text {

namespace {

// Sentence-terminator exception list. Entries are casefolded and stored
// without the final period ("e.g." -> "e.g"). Homographs of common words
// that often end sentences ("sat", "sun", "no") are deliberately absent:
// losing the rare "No. 5" case costs less than swallowing real breaks.
const std::unordered_set<std::string>& abbreviations() {
    static const std::unordered_set<std::string> abbr = {
        "dr",    "mr",   "mrs",  "ms",   "prof", "rev",  "gen",  "sen",  "rep",
        "sr",    "jr",   "st",   "mt",   "ft",   "capt", "col",  "lt",   "sgt",
        "e.g",   "i.e",  "etc",  "vs",   "cf",   "al",   "ca",   "approx",
        "inc",   "ltd",  "co",   "corp", "dept", "div",  "est",  "assn",
        "jan",   "feb",  "mar",  "apr",  "jun",  "jul",  "aug",  "sep",  "sept",
        "oct",   "nov",  "dec",  "mon",  "tue",  "wed",  "thu",  "fri",
        "nos",   "vol",  "pp",   "p",    "fig",  "figs", "ch",
        "sec",   "ave",  "blvd", "rd",   "hwy",  "u.s",  "u.k",  "u.n",
        "ph.d",  "b.a",  "m.a",  "b.sc", "m.sc", "d.c",  "a.m",  "p.m",
    };
    return abbr;
}

bool is_space_cp(uint32_t cp) {
    return cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == 0xA0;
}

// Non-ASCII punctuation we care about; every other >=0x80 codepoint counts
// as a letter so accented words stay whole.
bool is_punct_cp(uint32_t cp) {
    if (cp < 0x80) return !ascii_alnum(static_cast<char>(cp)) && !is_space_cp(cp);
    switch (cp) {
        case 0x2018: case 0x2019: case 0x201C: case 0x201D: // quotes
        case 0x00AB: case 0x00BB:                           // guillemets
        case 0x2013: case 0x2014: case 0x2026:              // dashes, ellipsis
        case 0x00B7: case 0x2022:                           // middle dot, bullet
            return true;
        default:
            return false;
    }
}

bool is_word_cp(uint32_t cp) { return !is_space_cp(cp) && !is_punct_cp(cp); }

bool is_apostrophe(uint32_t cp) { return cp == '\'' || cp == 0x2019; }

// The word immediately before a '.', allowing internal dots ("e.g", "u.s").
std::string preceding_word(const std::string& s, size_t dot) {
    size_t b = dot;
    while (b > 0) {
        char c = s[b - 1];
        if (ascii_alpha(c) || (c == '.' && b >= 2 && ascii_alpha(s[b - 2]))) {
            --b;
        } else {
            break;
        }
    }
    return casefold(std::string_view(s).substr(b, dot - b));
}

bool blank_line(std::string_view line) {
    for (char c : line)
        if (c != ' ' && c != '\t' && c != '\r') return false;
    return true;
}

std::vector<Token> tokenize_range(const std::string& s, size_t begin, size_t end) {
    std::vector<Token> tokens;
    size_t i = begin;
    while (i < end) {
        size_t cp_begin = i;
        uint32_t cp = utf8_decode(s, i);
        if (is_space_cp(cp)) continue;

        Token t;
        t.begin = cp_begin;
        if (is_word_cp(cp)) {
            t.is_word = true;
            size_t last_end = i;
            while (i < end) {
                size_t probe = i;
                uint32_t next = utf8_decode(s, probe);
                if (is_word_cp(next)) {
                    i = probe;
                    last_end = i;
                    continue;
                }
                if (is_apostrophe(next) && probe < end) {
                    size_t after = probe;
                    uint32_t following = utf8_decode(s, after);
                    if (is_word_cp(following)) { // don't, O'Brien
                        i = after;
                        last_end = i;
                        continue;
                    }
                }
                break;
            }
            t.end = last_end;
        } else {
            t.is_word = false;
            t.end = i;
            t.pos = PosTag::PUNCT;
        }
        t.surface = s.substr(t.begin, t.end - t.begin);
        t.folded = casefold(t.surface);
        tokens.push_back(std::move(t));
    }
    return tokens;
}

// Sentence break positions inside one paragraph: a {. ! ?} followed by
// whitespace and an uppercase letter or digit, unless the period closes a
// listed abbreviation. Returns end offsets (exclusive of the whitespace).
std::vector<size_t> sentence_ends(const std::string& s, size_t begin, size_t end) {
    std::vector<size_t> ends;
    for (size_t i = begin; i < end; ++i) {
        char c = s[i];
        if (c != '.' && c != '!' && c != '?') continue;
        size_t j = i + 1;
        if (j >= end || !(s[j] == ' ' || s[j] == '\t' || s[j] == '\n' || s[j] == '\r')) continue;
        while (j < end && (s[j] == ' ' || s[j] == '\t' || s[j] == '\n' || s[j] == '\r')) ++j;
        if (j >= end) break;
        if (!(ascii_upper_alpha(s[j]) || ascii_digit(s[j]))) continue;
        if (c == '.' && abbreviations().count(preceding_word(s, i)) > 0) continue;
        ends.push_back(i + 1);
    }
    ends.push_back(end);
    return ends;
}

} // namespace

size_t Sentence::word_count() const {
    size_t n = 0;
    for (const auto& t : tokens) n += t.is_word ? 1 : 0;
    return n;
}

size_t StructuredText::sentence_count() const {
    size_t n = 0;
    for (const auto& p : paragraphs) n += p.sentences.size();
    return n;
}

size_t StructuredText::word_count() const {
    size_t n = 0;
    for_each_token([&](const Token& t) { n += t.is_word ? 1 : 0; });
    return n;
}

size_t StructuredText::punct_token_count() const {
    size_t n = 0;
    for_each_token([&](const Token& t) { n += t.is_word ? 0 : 1; });
    return n;
}

StructuredText structure(const std::string& text) {
    if (trim(text).empty()) throw std::invalid_argument("structure: empty text");

    StructuredText doc;
    doc.source = text;

    // Paragraphs: maximal runs of non-blank lines.
    size_t pos = 0;
    size_t para_begin = std::string::npos;
    size_t para_end = 0;
    auto flush_paragraph = [&]() {
        if (para_begin == std::string::npos) return;
        Paragraph para;
        para.begin = para_begin;
        para.end = para_end;
        for (size_t send : sentence_ends(text, para_begin, para_end)) {
            size_t sbegin = para.sentences.empty() ? para.begin : para.sentences.back().end;
            Sentence sent;
            sent.begin = sbegin;
            sent.end = send;
            sent.tokens = tokenize_range(text, sbegin, send);
            if (!sent.tokens.empty()) para.sentences.push_back(std::move(sent));
        }
        if (!para.sentences.empty()) doc.paragraphs.push_back(std::move(para));
        para_begin = std::string::npos;
    };

    while (pos <= text.size()) {
        size_t eol = text.find('\n', pos);
        if (eol == std::string::npos) eol = text.size();
        std::string_view line(text.data() + pos, eol - pos);
        if (blank_line(line)) {
            flush_paragraph();
        } else {
            if (para_begin == std::string::npos) para_begin = pos;
            para_end = eol;
        }
        if (eol == text.size()) break;
        pos = eol + 1;
    }
    flush_paragraph();

    if (doc.paragraphs.empty()) throw std::invalid_argument("structure: no tokens");
    return doc;
}

int count_syllables(const std::string& word) {
    std::string w = casefold(word);
    bool has_letter = false;
    for (char c : w) {
        if (ascii_alpha(c)) { has_letter = true; break; }
    }
    if (!has_letter) throw std::invalid_argument("count_syllables: no letter in \"" + word + "\"");

    auto is_vowel = [](char c) {
        return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
    };

    int groups = 0;
    bool in_group = false;
    char last_letter = 0, prev_letter = 0;
    for (char c : w) {
        if (!ascii_alpha(c)) { in_group = false; continue; }
        if (is_vowel(c)) {
            if (!in_group) ++groups;
            in_group = true;
        } else {
            in_group = false;
        }
        prev_letter = last_letter;
        last_letter = c;
    }

    int n = groups;
    if (last_letter == 'e') {
        bool consonant_le = last_letter == 'e' && prev_letter == 'l';
        if (consonant_le) {
            // "table": keep the -le syllable unless a vowel precedes the l
            size_t len = 0;
            char before_l = 0;
            for (char c : w)
                if (ascii_alpha(c)) ++len;
            // find the letter before the trailing "le"
            int seen = 0;
            for (auto it = w.rbegin(); it != w.rend(); ++it) {
                if (!ascii_alpha(*it)) continue;
                ++seen;
                if (seen == 3) { before_l = *it; break; }
            }
            if (len >= 3 && !is_vowel(before_l)) {
                // consonant + "le": syllabic, no subtraction
            } else {
                --n;
            }
        } else {
            --n;
        }
    }
    return n < 1 ? 1 : n;
}

namespace {

PosTag suffix_tag(const std::string& folded, const std::string& surface) {
    auto ends = [&](const char* suf) {
        size_t n = std::char_traits<char>::length(suf);
        return folded.size() > n && folded.compare(folded.size() - n, n, suf) == 0;
    };
    if (ascii_digit(folded[0])) return PosTag::NUM;
    if (ends("ly")) return PosTag::ADV;
    if (ends("tion") || ends("sion") || ends("ness") || ends("ment") || ends("ity") ||
        ends("ship") || ends("ism") || ends("ance") || ends("ence"))
        return PosTag::NOUN;
    if (ends("ize") || ends("ise") || ends("ed") || ends("ing")) return PosTag::VERB;
    if (ends("ous") || ends("ful") || ends("ive") || ends("able") || ends("ible") || ends("ic"))
        return PosTag::ADJ;
    if (!surface.empty() && ascii_upper_alpha(surface[0])) return PosTag::NOUN;
    return PosTag::X;
}

} // namespace

std::vector<PosTag> pos_tag(const std::vector<Token>& sentence_tokens, const LexiconSet& lex) {
    std::vector<PosTag> tags;
    tags.reserve(sentence_tokens.size());
    for (const auto& t : sentence_tokens) {
        if (!t.is_word) {
            tags.push_back(PosTag::PUNCT);
            continue;
        }
        auto it = lex.pos_lexicon.find(t.folded);
        if (it != lex.pos_lexicon.end()) {
            tags.push_back(it->second);
            continue;
        }
        tags.push_back(suffix_tag(t.folded, t.surface));
    }
    return tags;
}

void annotate_pos(StructuredText& doc, const LexiconSet& lex) {
    for (auto& p : doc.paragraphs) {
        for (auto& s : p.sentences) {
            auto tags = pos_tag(s.tokens, lex);
            for (size_t i = 0; i < s.tokens.size(); ++i) s.tokens[i].pos = tags[i];
        }
    }
}

const char* pos_tag_name(PosTag t) {
    switch (t) {
        case PosTag::NOUN: return "NOUN";
        case PosTag::VERB: return "VERB";
        case PosTag::ADJ: return "ADJ";
        case PosTag::ADV: return "ADV";
        case PosTag::PRON: return "PRON";
        case PosTag::DET: return "DET";
        case PosTag::ADP: return "ADP";
        case PosTag::NUM: return "NUM";
        case PosTag::CONJ: return "CONJ";
        case PosTag::PRT: return "PRT";
        case PosTag::PUNCT: return "PUNCT";
        case PosTag::X: return "X";
    }
    return "X";
}

PosTag pos_tag_from_name(const std::string& name) {
    static const std::array<PosTag, 12> all = {
        PosTag::NOUN, PosTag::VERB, PosTag::ADJ,  PosTag::ADV,  PosTag::PRON, PosTag::DET,
        PosTag::ADP,  PosTag::NUM,  PosTag::CONJ, PosTag::PRT,  PosTag::PUNCT, PosTag::X};
    for (PosTag t : all)
        if (name == pos_tag_name(t)) return t;
    throw std::invalid_argument("unknown POS tag: " + name);
}

} // namespace stylo::text
