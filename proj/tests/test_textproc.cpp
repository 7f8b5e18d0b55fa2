#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>
#include <vector>

#include "stylodetect/lexicon.hpp"
#include "stylodetect/textproc.hpp"

using namespace stylo::text;

namespace {

std::vector<std::string> word_surfaces(const StructuredText& doc) {
    std::vector<std::string> out;
    doc.for_each_token([&](const Token& t) {
        if (t.is_word) out.push_back(t.surface);
    });
    return out;
}

bool ascii_ws(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

} // namespace

TEST_CASE("two sentences, one paragraph") {
    auto doc = structure("Hello world. Bye.");
    CHECK(doc.paragraphs.size() == 1);
    CHECK(doc.sentence_count() == 2);
    CHECK(word_surfaces(doc) == std::vector<std::string>{"Hello", "world", "Bye"});
    CHECK(doc.word_count() == 3);
    CHECK(doc.punct_token_count() == 2);
}

TEST_CASE("abbreviation does not end the sentence") {
    auto doc = structure("Dr. Smith left.");
    CHECK(doc.sentence_count() == 1);
    CHECK(structure("See fig. 4 for details.").sentence_count() == 1);
    CHECK(structure("It grew, e.g. Rome did. Athens too.").sentence_count() == 2);
}

TEST_CASE("blank line separates paragraphs") {
    auto doc = structure("A.\n\nB.");
    CHECK(doc.paragraphs.size() == 2);
    CHECK(doc.sentence_count() == 2);
    // whitespace-only lines, or several consecutive blanks, act the same
    CHECK(structure("A.\n \t\nB.").paragraphs.size() == 2);
    CHECK(structure("A.\n\n\n\nB.").paragraphs.size() == 2);
    // a plain newline inside a paragraph does not split it
    CHECK(structure("A line\nanother line.").paragraphs.size() == 1);
}

TEST_CASE("sentence break needs whitespace plus uppercase or digit") {
    CHECK(structure("He left. then he returned.").sentence_count() == 1);
    CHECK(structure("He left. Then he returned.").sentence_count() == 2);
    CHECK(structure("Version 2. 3 was next.").sentence_count() == 2);
    CHECK(structure("Really?! Yes.").sentence_count() == 2);
    CHECK(structure("A value of 3.14 is close.").sentence_count() == 1);
}

TEST_CASE("tokens keep punctuation and word-internal apostrophes") {
    auto doc = structure("Don't stop, O'Brien; the dogs' bowls (two) are full...");
    std::vector<std::string> words = word_surfaces(doc);
    CHECK(words[0] == "Don't");
    CHECK(words[2] == "O'Brien");
    CHECK(words[4] == "dogs"); // trailing apostrophe splits off
    std::vector<std::string> puncts;
    doc.for_each_token([&](const Token& t) {
        if (!t.is_word) puncts.push_back(t.surface);
    });
    CHECK(puncts == std::vector<std::string>{",", ";", "'", "(", ")", ".", ".", "."});
}

TEST_CASE("accented words and curly quotes") {
    auto doc = structure("She said “naïve café” again.");
    auto words = word_surfaces(doc);
    CHECK(words == std::vector<std::string>{"She", "said", "naïve", "café", "again"});
    CHECK(doc.punct_token_count() == 3); // two curly quotes + final period
}

TEST_CASE("token spans reconstruct the source text") {
    const std::string text = "First one.  Second, with 3 numbers!\n\nNew paragraph... done?";
    auto doc = structure(text);
    size_t prev_end = 0;
    doc.for_each_token([&](const Token& t) {
        CHECK(t.begin >= prev_end);
        for (size_t i = prev_end; i < t.begin; ++i) CHECK(ascii_ws(text[i]));
        CHECK(text.substr(t.begin, t.end - t.begin) == t.surface);
        prev_end = t.end;
    });
    for (size_t i = prev_end; i < text.size(); ++i) CHECK(ascii_ws(text[i]));
}

TEST_CASE("token partition: words + punctuation = all tokens") {
    auto doc = structure("One two, three. Four! (Five.)\n\nSix?");
    size_t total = 0;
    doc.for_each_sentence([&](const Sentence& s) {
        CHECK(!s.tokens.empty());
        total += s.tokens.size();
    });
    CHECK(total == doc.word_count() + doc.punct_token_count());
    for (const auto& p : doc.paragraphs) CHECK(!p.sentences.empty());
}

TEST_CASE("structure is deterministic") {
    const std::string text = "Stable output. Every time!\n\nEven across calls.";
    auto a = structure(text);
    auto b = structure(text);
    REQUIRE(a.sentence_count() == b.sentence_count());
    std::vector<std::string> sa, sb;
    a.for_each_token([&](const Token& t) { sa.push_back(t.surface); });
    b.for_each_token([&](const Token& t) { sb.push_back(t.surface); });
    CHECK(sa == sb);
}

TEST_CASE("structure rejects empty input") {
    CHECK_THROWS_AS(structure(""), std::invalid_argument);
    CHECK_THROWS_AS(structure("  \n \t "), std::invalid_argument);
}

TEST_CASE("syllable counts") {
    CHECK(count_syllables("cat") == 1);
    CHECK(count_syllables("beautiful") == 3); // eau|i|u
    CHECK(count_syllables("make") == 1);      // silent final e
    CHECK(count_syllables("table") == 2);     // consonant + le keeps its syllable
    CHECK(count_syllables("whale") == 1);     // vowel + le: the e is silent
    CHECK(count_syllables("apple") == 2);
    CHECK(count_syllables("the") == 1);  // floor at 1
    CHECK(count_syllables("queue") == 1);
    CHECK(count_syllables("rhythm") == 1);
    CHECK(count_syllables("people") == 2);
    CHECK(count_syllables("understanding") == 4);
    CHECK(count_syllables("Animal") == 3); // case-insensitive
}

TEST_CASE("syllables require a letter") {
    CHECK_THROWS_AS(count_syllables("1234"), std::invalid_argument);
    CHECK_THROWS_AS(count_syllables("..."), std::invalid_argument);
    CHECK(count_syllables("3rd") == 1); // mixed input is fine
}

TEST_CASE("every word with a vowel gets at least one syllable") {
    for (const char* w : {"strengths", "b", "fly", "hmm-e", "xylophone", "eee"}) {
        CHECK(count_syllables(w) >= 1);
    }
}

TEST_CASE("pos tagging: lexicon lookup") {
    const auto& lex = LexiconSet::bundled();
    auto doc = structure("the dog runs");
    auto tags = pos_tag(doc.paragraphs[0].sentences[0].tokens, lex);
    REQUIRE(tags.size() == 3);
    CHECK(tags[0] == PosTag::DET);
    CHECK(tags[1] == PosTag::NOUN);
    CHECK(tags[2] == PosTag::VERB);
}

TEST_CASE("pos tagging: suffix heuristics and fallbacks") {
    const auto& lex = LexiconSet::bundled();
    auto doc = structure("Blatheration frumbling quickly snorply vorptious zibblize snorkful 42 zxqv Grembek .");
    auto& toks = doc.paragraphs[0].sentences[0].tokens;
    auto tags = pos_tag(toks, lex);
    REQUIRE(tags.size() == 11);
    CHECK(tags[0] == PosTag::NOUN);  // -tion
    CHECK(tags[1] == PosTag::VERB);  // -ing
    CHECK(tags[2] == PosTag::ADV);   // -ly (also in lexicon)
    CHECK(tags[3] == PosTag::ADV);   // -ly on an unknown word
    CHECK(tags[4] == PosTag::ADJ);   // -ous
    CHECK(tags[5] == PosTag::VERB);  // -ize
    CHECK(tags[6] == PosTag::ADJ);   // -ful
    CHECK(tags[7] == PosTag::NUM);   // digits
    CHECK(tags[8] == PosTag::X);     // unknown lowercase
    CHECK(tags[9] == PosTag::NOUN);  // capitalized unknown
    CHECK(tags[10] == PosTag::PUNCT);
}

TEST_CASE("annotate_pos writes tags onto every token") {
    const auto& lex = LexiconSet::bundled();
    auto doc = structure("The dog runs. It barks loudly!");
    annotate_pos(doc, lex);
    doc.for_each_token([&](const Token& t) {
        if (!t.is_word) CHECK(t.pos == PosTag::PUNCT);
    });
    auto& s0 = doc.paragraphs[0].sentences[0].tokens;
    CHECK(s0[0].pos == PosTag::DET);
    auto& s1 = doc.paragraphs[0].sentences[1].tokens;
    CHECK(s1[0].pos == PosTag::PRON);
}

TEST_CASE("pos tag names round-trip") {
    for (auto t : {PosTag::NOUN, PosTag::VERB, PosTag::ADJ, PosTag::ADV, PosTag::PRON,
                   PosTag::DET, PosTag::ADP, PosTag::NUM, PosTag::CONJ, PosTag::PRT,
                   PosTag::PUNCT, PosTag::X}) {
        CHECK(pos_tag_from_name(pos_tag_name(t)) == t);
    }
    CHECK_THROWS_AS(pos_tag_from_name("VERBISH"), std::invalid_argument);
}

TEST_CASE("bundled lexicons load with expected entries") {
    const auto& lex = LexiconSet::bundled();
    CHECK(lex.is_stop_word("a"));
    CHECK(lex.is_stop_word("an"));
    CHECK(lex.is_stop_word("the"));
    CHECK(lex.is_stop_word("of"));
    CHECK(!lex.is_stop_word("dog"));

    REQUIRE(lex.sentiment.count("good") == 1);
    CHECK(lex.sentiment.at("good").polarity == doctest::Approx(0.7));
    CHECK(lex.sentiment.at("good").subjectivity == doctest::Approx(0.6));
    for (const auto& [word, entry] : lex.sentiment) {
        CHECK(entry.polarity >= -1.0);
        CHECK(entry.polarity <= 1.0);
        CHECK(entry.subjectivity >= 0.0);
        CHECK(entry.subjectivity <= 1.0);
    }

    CHECK(lex.personal_pronouns.count("i") == 1);
    CHECK(lex.personal_pronouns.count("themselves") == 1);
    CHECK(lex.negators.count("not") == 1);

    // discourse markers include single words and tokenized phrases
    bool has_however = false, has_multiword = false;
    for (const auto& phrase : lex.discourse_markers) {
        if (phrase == std::vector<std::string>{"however"}) has_however = true;
        if (phrase.size() > 1) has_multiword = true;
    }
    CHECK(has_however);
    CHECK(has_multiword);

    CHECK(lex.in_dictionary("dog"));
    CHECK(lex.in_dictionary("however"));
    CHECK(!lex.in_dictionary("zxqv"));
}

TEST_CASE("lexicon entries are casefolded and content-hashed") {
    const auto& lex = LexiconSet::bundled();
    auto folded = [](const std::string& w) {
        for (char c : w)
            if (c >= 'A' && c <= 'Z') return false;
        return true;
    };
    for (const auto& w : lex.stop_words) CHECK(folded(w));
    for (const auto& [w, tag] : lex.pos_lexicon) CHECK(folded(w));
    for (const auto& w : lex.spelling_dictionary) CHECK(folded(w));

    CHECK(lex.content_hashes.size() == 7);
    for (const auto& [file, hash] : lex.content_hashes) {
        CHECK(hash.size() == 64);
        CHECK(hash.find_first_not_of("0123456789abcdef") == std::string::npos);
    }
}

TEST_CASE("loading from a missing directory throws") {
    CHECK_THROWS(LexiconSet::load("/nonexistent/dir"));
}
