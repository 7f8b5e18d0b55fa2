#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "stylodetect/features.hpp"

using namespace stylo;
using namespace stylo::fea;

namespace {

struct FixedScorer final : lm::SentenceScorer {
    double value;
    explicit FixedScorer(double v) : value(v) {}
    double sentence_perplexity(const std::vector<std::string>&) const override { return value; }
};

struct FakeChat final : ChatProvider {
    std::string reply = "No.";
    mutable int calls = 0;
    std::string feedback(const std::string&) override {
        ++calls;
        return reply;
    }
    std::string id() const override { return "fake-chat"; }
};

struct BoomChat final : ChatProvider {
    std::string feedback(const std::string&) override { throw std::runtime_error("chat down"); }
    std::string id() const override { return "boom-chat"; }
};

struct BoomGrammar final : GrammarProvider {
    int error_count(const std::string&) override { throw std::runtime_error("grammar down"); }
    std::string id() const override { return "boom-grammar"; }
};

struct ZeroGrammar final : GrammarProvider {
    int error_count(const std::string&) override { return 0; }
    std::string id() const override { return "zero-grammar"; }
};

const text::LexiconSet& lex() { return text::LexiconSet::bundled(); }

std::map<std::string, double> doc_features(const std::string& body) {
    return document_features(text::structure(body), lex());
}

} // namespace

// ---------------------------------------------------------------------------
// Schema

TEST_CASE("standard schema holds 37 features with the fixed category sizes") {
    auto schema = FeatureSchema::standard(256);
    CHECK(schema.descriptors().size() == 37);
    CHECK(schema.total_arity() == 34 + 500 + 256 + 1);

    std::map<Category, int> scalars;
    for (const auto& d : schema.descriptors())
        if (d.arity == 1 && d.category != Category::text_vector) scalars[d.category]++;
    CHECK(scalars[Category::perplexity] == 2);
    CHECK(scalars[Category::semantic] == 2);
    CHECK(scalars[Category::list_lookup] == 5);
    CHECK(scalars[Category::document] == 20);
    CHECK(scalars[Category::error_based] == 2);
    CHECK(scalars[Category::readability] == 2);
    CHECK(scalars[Category::ai_feedback] == 1);
}

TEST_CASE("exactly ten features are tagged new") {
    auto schema = FeatureSchema::standard(16);
    std::set<std::string> novel;
    for (const auto& d : schema.descriptors())
        if (d.tag == Tag::novel) novel.insert(d.name);
    CHECK(novel == std::set<std::string>{
                       "sentiment_subjectivity", "discourseMarker_count", "titleRepetition_count",
                       "titleRepetition_relative", "uniqWordsPerSentence_stdev", "quotation_count",
                       "grammarError_count", "multiBlank_count", "AIFeedback", "sentenceVector_dist"});
}

TEST_CASE("column names expand vector blocks with index suffixes") {
    auto schema = FeatureSchema::standard(256);
    auto names = schema.column_names();
    REQUIRE(names.size() == 791);
    CHECK(names.front() == "PPL_mean");
    CHECK(names.back() == "sentenceVector_dist");
    CHECK(std::count(names.begin(), names.end(), "tfidf_0") == 1);
    CHECK(std::count(names.begin(), names.end(), "tfidf_499") == 1);
    CHECK(std::count(names.begin(), names.end(), "sentenceVector_255") == 1);
    CHECK(std::count(names.begin(), names.end(), "tfidf_500") == 0);
}

TEST_CASE("schema rejects duplicates and zero arity") {
    CHECK_THROWS_AS(FeatureSchema({{"a", Category::document, Tag::traditional, 1},
                                   {"a", Category::document, Tag::traditional, 1}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(FeatureSchema({{"a", Category::document, Tag::traditional, 0}}),
                    std::invalid_argument);
}

TEST_CASE("the fourteen selection presets cover the expected feature counts") {
    auto schema = FeatureSchema::standard(8);
    std::map<std::string, size_t> expected{
        {"Perplexity_traditional", 2},
        {"Semantic_traditional", 1},
        {"Semantic_traditional+new", 2},
        {"ListLookup_traditional", 2},
        {"ListLookup_traditional+new", 5},
        {"Document_traditional", 18},
        {"Document_traditional+new", 20},
        {"ErrorBased_new", 2},
        {"Readability_traditional", 2},
        {"AIFeedback_new", 1},
        {"TextVector_traditional", 508},
        {"TextVector_traditional+new", 509},
        {"All_traditional", 533},
        {"All_traditional+new", 543},
    };
    REQUIRE(selection_preset_names().size() == 14);
    for (const auto& name : selection_preset_names()) {
        auto sel = selection_from_name(name);
        CHECK(sel.name == name);
        CHECK(subset(schema, sel).total_arity() == expected.at(name));
    }
}

TEST_CASE("selections outside the preset list are rejected") {
    CHECK_THROWS_AS(selection_from_name("Everything"), std::invalid_argument);
    CHECK_THROWS_AS(selection_from_name("Perplexity_new"), std::invalid_argument);
    CHECK_THROWS_AS(selection_from_name("All_new"), std::invalid_argument);
    CHECK_THROWS_AS(selection_from_name(""), std::invalid_argument);
}

TEST_CASE("document-only selections exclude the new features") {
    auto schema = FeatureSchema::standard(8);
    auto sub = subset(schema, selection_from_name("Document_traditional"));
    auto names = sub.column_names();
    CHECK(std::count(names.begin(), names.end(), "quotation_count") == 0);
    CHECK(std::count(names.begin(), names.end(), "uniqWordsPerSentence_stdev") == 0);
    CHECK(std::count(names.begin(), names.end(), "wordsPerSentence_mean") == 1);
}

// ---------------------------------------------------------------------------
// Semantic

TEST_CASE("semantic features default to zero when nothing matches") {
    auto sem = semantic_features(text::structure("The table stood there."), lex());
    CHECK(sem.polarity == 0.0);
    CHECK(sem.subjectivity == 0.0);
}

TEST_CASE("a single matched word reports its lexicon scores") {
    auto sem = semantic_features(text::structure("Good."), lex());
    CHECK(sem.polarity == doctest::Approx(0.7));
    CHECK(sem.subjectivity == doctest::Approx(0.6));
}

TEST_CASE("negation flips polarity but not subjectivity") {
    auto sem = semantic_features(text::structure("Not good."), lex());
    CHECK(sem.polarity == doctest::Approx(-0.7));
    CHECK(sem.subjectivity == doctest::Approx(0.6));
}

TEST_CASE("the negation window spans three preceding words of the sentence") {
    // negator exactly 3 words back still flips
    CHECK(semantic_features(text::structure("Not so very good."), lex()).polarity ==
          doctest::Approx(-0.7));
    // 4 words back does not
    CHECK(semantic_features(text::structure("Only not so very truly good."), lex()).polarity ==
          doctest::Approx(0.7));
    // a negator in the previous sentence does not reach across the boundary
    CHECK(semantic_features(text::structure("It was not. Good times came."), lex()).polarity ==
          doctest::Approx(0.7));
}

TEST_CASE("semantic features average over all matched words") {
    auto sem = semantic_features(text::structure("It was good and bad."), lex());
    CHECK(sem.polarity == doctest::Approx(0.0));
    CHECK(sem.subjectivity == doctest::Approx((0.6 + 0.667) / 2));
}

// ---------------------------------------------------------------------------
// List lookup

TEST_CASE("title keywords are counted across the body") {
    auto ll = list_lookup_features(text::structure("Vienna is big. Vienna is old."), "Vienna", lex());
    CHECK(ll.title_repetition_count == 2);
    CHECK(ll.title_repetition_relative == doctest::Approx(2.0 / 6.0));
    CHECK(ll.stop_word_count == 2); // "is" twice
}

TEST_CASE("stop words in the title do not become keywords") {
    auto ll = list_lookup_features(text::structure("Growth is growth."), "The Growth", lex());
    CHECK(ll.title_repetition_count == 2);
    CHECK(ll.title_repetition_relative == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("discourse markers are counted casefolded") {
    auto ll = list_lookup_features(text::structure("However, it grew; moreover, it thrived."),
                                   "Growth", lex());
    CHECK(ll.discourse_marker_count == 2);
    CHECK(ll.stop_word_count == 2); // "it" twice
    CHECK(list_lookup_features(text::structure("HOWEVER, it grew."), "Growth", lex())
              .discourse_marker_count == 1);
}

TEST_CASE("longer discourse markers win and consume their tokens") {
    text::LexiconSet synthetic;
    synthetic.discourse_markers = {{"in", "addition"}, {"addition"}};
    CHECK(list_lookup_features(text::structure("In addition, we win."), "T", synthetic)
              .discourse_marker_count == 1);
    CHECK(list_lookup_features(text::structure("Addition is here."), "T", synthetic)
              .discourse_marker_count == 1);
}

TEST_CASE("special characters are counted from the declared set") {
    auto ll = list_lookup_features(text::structure("a @ b # c"), "X", lex());
    CHECK(ll.special_char_count == 2);
    CHECK(ll.stop_word_count == 1); // "a"
    CHECK(list_lookup_features(text::structure("plain words only"), "X", lex()).special_char_count ==
          0);
}

TEST_CASE("an empty title is rejected") {
    CHECK_THROWS_AS(list_lookup_features(text::structure("Body."), "", lex()),
                    std::invalid_argument);
}

// ---------------------------------------------------------------------------
// Document statistics

TEST_CASE("single-sentence document statistics") {
    auto f = doc_features("Hello world.");
    CHECK(f.size() == 20);
    CHECK(f.at("words_count") == 2);
    CHECK(f.at("sentence_count") == 1);
    CHECK(f.at("paragraph_count") == 1);
    CHECK(f.at("wordsPerSentence_stdev") == 0.0);
    CHECK(f.at("punctuation_count") == 1);
    CHECK(f.at("quotation_count") == 0);
    CHECK(f.at("character_count") == 12);
    CHECK(f.at("uniqWords_count") == 2);
    CHECK(f.at("uniqWords_relative") == 1.0);
}

TEST_CASE("sentence-length spread uses the population deviation") {
    auto f = doc_features("We ran. They all ran far.");
    CHECK(f.at("wordsPerSentence_mean") == doctest::Approx(3.0));
    CHECK(f.at("wordsPerSentence_stdev") == doctest::Approx(1.0));
    CHECK(f.at("uniqWordsPerSentence_mean") == doctest::Approx(3.0));
    CHECK(f.at("uniqWordsPerSentence_stdev") == doctest::Approx(1.0));
    CHECK(f.at("uniqWords_count") == 5);
    CHECK(f.at("uniqWords_relative") == doctest::Approx(5.0 / 6.0));
}

TEST_CASE("paragraph statistics aggregate across blank-line splits") {
    auto f = doc_features("One two.\n\nThree four five. Six.");
    CHECK(f.at("paragraph_count") == 2);
    CHECK(f.at("wordsPerParagraph_mean") == doctest::Approx(3.0));
    CHECK(f.at("wordsPerParagraph_stdev") == doctest::Approx(1.0));
    CHECK(f.at("sentencesPerParagraph_mean") == doctest::Approx(1.5));
    CHECK(f.at("sentencesPerParagraph_stdev") == doctest::Approx(0.5));
    CHECK(f.at("wordsPerSentence_stdev") == doctest::Approx(std::sqrt(2.0 / 3.0)));
    CHECK(f.at("character_count") == 31);
}

TEST_CASE("quotation marks count straight and typographic quotes") {
    CHECK(doc_features("She said \"ok\" and \"fine\".").at("quotation_count") == 4);
    CHECK(doc_features("\xc2\xabx\xc2\xbb and \xe2\x80\x9cok\xe2\x80\x9d.").at("quotation_count") ==
          4);
}

TEST_CASE("characters are counted as codepoints including whitespace") {
    CHECK(doc_features("caf\xc3\xa9.").at("character_count") == 5);
}

TEST_CASE("uppercase words need at least two letters") {
    auto f = doc_features("NASA and IBM are here.");
    CHECK(f.at("uppercaseWords_relative") == doctest::Approx(2.0 / 5.0));
    CHECK(doc_features("I am OK.").at("uppercaseWords_relative") == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("personal pronouns are counted from the lexicon") {
    auto f = doc_features("I like you.");
    CHECK(f.at("personalPronoun_count") == 2);
    CHECK(f.at("personalPronoun_relative") == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("distinct POS tags per sentence") {
    CHECK(doc_features("The dog runs.").at("POSPerSentence_mean") == doctest::Approx(3.0));
}

// ---------------------------------------------------------------------------
// Error-based

TEST_CASE("multiple blanks are maximal space runs of length two or more") {
    CHECK(multi_blank_count("a  b   c") == 2);
    CHECK(multi_blank_count("a b c") == 0);
    CHECK(multi_blank_count("ab  ") == 1);
    CHECK(multi_blank_count("  lead") == 1);
    CHECK(multi_blank_count("a\t\tb") == 0);
    CHECK(multi_blank_count("") == 0);
}

TEST_CASE("rule-based grammar checks spelling, doubles, and articles") {
    RuleGrammar rules(lex());
    CHECK(rules.error_count("The cat sat.") == 0);
    CHECK(rules.error_count("The the cat sat.") == 1);     // doubled word
    CHECK(rules.error_count("I saw a qwzrt.") == 1);       // dictionary miss
    CHECK(rules.error_count("I saw Qwzrt yesterday.") == 0); // capitalized mid-sentence: skipped
    CHECK(rules.error_count("Qwzrt runs far.") == 1);      // sentence-initial caps still checked
    CHECK(rules.error_count("It was a idea.") == 1);       // a + vowel
    CHECK(rules.error_count("It was an dog.") == 1);       // an + consonant
    CHECK(rules.error_count("The 42 sat.") == 0);          // numerals skipped
    CHECK(rules.error_count("") == 0);
    CHECK(rules.error_count("   \n ") == 0);
}

TEST_CASE("error features combine the provider count and blank runs") {
    RuleGrammar rules(lex());
    auto err = error_features("The the cat sat.  It was a idea.", rules);
    CHECK(err.grammar_error_count == 2);
    CHECK(err.multi_blank_count == 1);

    ZeroGrammar zero;
    CHECK(error_features("clean text", zero).grammar_error_count == 0);
}

// ---------------------------------------------------------------------------
// Readability

TEST_CASE("flesch scores for a one-syllable-per-word sentence") {
    auto r = readability_features(text::structure("The cat sat."));
    CHECK(r.flesch_reading_ease == doctest::Approx(119.19).epsilon(1e-6));
    CHECK(r.flesch_kincaid_grade_level == doctest::Approx(-2.62).epsilon(1e-4));
}

TEST_CASE("doubling every sentence leaves readability unchanged") {
    auto once = readability_features(text::structure("The cat sat."));
    auto twice = readability_features(text::structure("The cat sat. The cat sat."));
    CHECK(once.flesch_reading_ease == twice.flesch_reading_ease);
    CHECK(once.flesch_kincaid_grade_level == twice.flesch_kincaid_grade_level);
}

TEST_CASE("readability requires at least one word") {
    CHECK_THROWS_AS(readability_features(text::structure("?!")), std::invalid_argument);
}

// ---------------------------------------------------------------------------
// AI feedback

TEST_CASE("feedback replies classify by their leading token") {
    CHECK(classify_feedback("Yes, I generated that text.") == 2);
    CHECK(classify_feedback("No.") == 0);
    CHECK(classify_feedback("I cannot be certain about this.") == 1);
    CHECK(classify_feedback("  yes!") == 2);
    CHECK(classify_feedback("NO WAY") == 0);
    CHECK(classify_feedback("") == 1);
    CHECK(classify_feedback("...maybe?") == 1);
}

TEST_CASE("missing chat provider errors unless imputation is enabled") {
    CHECK_THROWS_AS(ai_feedback_feature("text", nullptr, false), std::runtime_error);
    CHECK(ai_feedback_feature("text", nullptr, true) == 1);

    FakeChat chat;
    chat.reply = "Yes indeed";
    CHECK(ai_feedback_feature("text", &chat, false) == 2);

    BoomChat boom;
    CHECK_THROWS_AS(ai_feedback_feature("text", &boom, false), std::runtime_error);
    CHECK(ai_feedback_feature("text", &boom, true) == 1);
}

// ---------------------------------------------------------------------------
// Assembly

namespace {

struct Fixture {
    corpus::TextSample sample;
    FixedScorer scorer{10.0};
    RuleGrammar rules{lex()};
    FakeChat chat;
    vec::TfidfModel tfidf;
    vec::HashedEmbedder embedder{8};
    FeatureSchema schema;

    Fixture() {
        sample.id = "fixture-01";
        sample.category = corpus::Category::biology;
        sample.topic_title = "Sun Times";
        sample.klass = corpus::Klass::human;
        sample.body = "The sun was good. We saw it here.\n\nIt was not bad. They all ran far.";
        tfidf = vec::TfidfModel::fit({"The sun was good.", "They all ran far. We saw it."}, 500);
        schema = FeatureSchema::standard(embedder.dim(), tfidf.dim());
    }

    FeatureProviders providers() {
        FeatureProviders p;
        p.scorer = &scorer;
        p.scorer_id = "fixed";
        p.lexicon = &lex();
        p.grammar = &rules;
        p.chat = &chat;
        p.tfidf = &tfidf;
        p.embedder = &embedder;
        return p;
    }
};

} // namespace

TEST_CASE("assemble produces the full vector in schema order") {
    Fixture fx;
    auto fv = assemble(fx.sample, fx.providers(), fx.schema, selection_from_name("All_traditional+new"));
    REQUIRE(fv.values.size() == 34 + fx.tfidf.dim() + 8 + 1);
    CHECK(fv.names == subset(fx.schema, selection_from_name("All_traditional+new")).column_names());
    CHECK(range_violations(fv).empty());

    // spot-check named positions
    auto at = [&](const std::string& name) {
        for (size_t i = 0; i < fv.names.size(); ++i)
            if (fv.names[i] == name) return fv.values[i];
        FAIL("missing column ", name);
        return 0.0;
    };
    CHECK(at("PPL_mean") == 10.0);
    CHECK(at("PPL_max") == 10.0);
    CHECK(at("words_count") == 16);
    CHECK(at("sentence_count") == 4);
    CHECK(at("paragraph_count") == 2);
    CHECK(at("titleRepetition_count") == 1); // "sun" once, "times" never
    CHECK(at("titleRepetition_relative") == doctest::Approx(1.0 / 16.0));
    CHECK(at("sentiment_polarity") == doctest::Approx(0.7)); // "good", "not bad"
    CHECK(at("grammarError_count") == 0);
    CHECK(at("multiBlank_count") == 0);
    CHECK(at("AIFeedback") == 0); // fake chat answers "No."

    CHECK(fv.provenance.at("perplexity") == "fixed");
    CHECK(fv.provenance.at("error_based") == "grammar-rules");
    CHECK(fv.provenance.at("ai_feedback") == "fake-chat");
    CHECK(fv.provenance.at("text_vector") == "hashed-ngram-8");
}

TEST_CASE("assemble is deterministic") {
    Fixture fx;
    auto sel = selection_from_name("All_traditional+new");
    auto a = assemble(fx.sample, fx.providers(), fx.schema, sel);
    auto b = assemble(fx.sample, fx.providers(), fx.schema, sel);
    CHECK(a.values == b.values);
    CHECK(a.names == b.names);
}

TEST_CASE("narrow selections produce only their own features") {
    Fixture fx;
    auto err = assemble(fx.sample, fx.providers(), fx.schema, selection_from_name("ErrorBased_new"));
    CHECK(err.names == std::vector<std::string>{"grammarError_count", "multiBlank_count"});

    auto ppl =
        assemble(fx.sample, fx.providers(), fx.schema, selection_from_name("Perplexity_traditional"));
    CHECK(ppl.names == std::vector<std::string>{"PPL_mean", "PPL_max"});
    CHECK(ppl.values == std::vector<double>{10.0, 10.0});
}

TEST_CASE("unselected providers are never consulted") {
    Fixture fx;
    auto providers = fx.providers();
    assemble(fx.sample, providers, fx.schema, selection_from_name("Document_traditional"));
    CHECK(fx.chat.calls == 0);

    // a selection without ai_feedback works even with no chat provider at all
    providers.chat = nullptr;
    CHECK_NOTHROW(
        assemble(fx.sample, providers, fx.schema, selection_from_name("Readability_traditional")));
}

TEST_CASE("provider failures carry the sample id") {
    Fixture fx;
    auto providers = fx.providers();
    BoomGrammar boom;
    providers.grammar = &boom;
    CHECK_THROWS_WITH_AS(
        assemble(fx.sample, providers, fx.schema, selection_from_name("ErrorBased_new")),
        doctest::Contains("fixture-01"), std::runtime_error);
}

TEST_CASE("missing providers for a selected block are reported") {
    Fixture fx;
    auto providers = fx.providers();
    providers.tfidf = nullptr;
    CHECK_THROWS_WITH_AS(
        assemble(fx.sample, providers, fx.schema, selection_from_name("TextVector_traditional")),
        doctest::Contains("tf-idf"), std::runtime_error);

    providers = fx.providers();
    providers.scorer = nullptr;
    CHECK_THROWS_AS(
        assemble(fx.sample, providers, fx.schema, selection_from_name("Perplexity_traditional")),
        std::runtime_error);
}

TEST_CASE("count features add up over concatenated texts") {
    const std::string a = "The the cat sat on a mat?  It was not \"bad\" (just @ odd).";
    const std::string b = "They all ran far!\n\nIt was a idea;  so we said \"ok\" here.";
    const std::string joined = a + "\n\n" + b;

    auto lla = list_lookup_features(text::structure(a), "T", lex());
    auto llb = list_lookup_features(text::structure(b), "T", lex());
    auto llj = list_lookup_features(text::structure(joined), "T", lex());
    CHECK(llj.stop_word_count == lla.stop_word_count + llb.stop_word_count);
    CHECK(llj.special_char_count == lla.special_char_count + llb.special_char_count);

    auto da = doc_features(a);
    auto db = doc_features(b);
    auto dj = doc_features(joined);
    CHECK(dj.at("punctuation_count") == da.at("punctuation_count") + db.at("punctuation_count"));
    CHECK(dj.at("quotation_count") == da.at("quotation_count") + db.at("quotation_count"));

    CHECK(multi_blank_count(joined) == multi_blank_count(a) + multi_blank_count(b));

    RuleGrammar rules(lex());
    CHECK(rules.error_count(joined) == rules.error_count(a) + rules.error_count(b));
}

// ---------------------------------------------------------------------------
// Validation and export

TEST_CASE("range violations are reported by column") {
    FeatureVector fv;
    fv.names = {"foo_count", "bar_count", "baz_relative", "sentiment_polarity", "AIFeedback",
                "PPL_mean", "free"};
    fv.values = {-1, 1.5, 1.2, -2, 3, 0.5, std::nan("")};
    auto v = range_violations(fv);
    CHECK(v.size() == 7);

    FeatureVector ok;
    ok.names = {"foo_count", "baz_relative", "AIFeedback", "PPL_mean", "free"};
    ok.values = {3, 0.25, 2, 1.0, -123.45};
    CHECK(range_violations(ok).empty());
}

TEST_CASE("feature matrices export as CSV with id and label columns") {
    FeatureVector r1{{"x", "y"}, {0.5, 2.0}, {}};
    FeatureVector r2{{"x", "y"}, {1.0, 3.0}, {}};
    auto csv = feature_matrix_csv({r1, r2}, {"a", "b,c"}, {0, 1});
    CHECK(csv == "x,y,id,label\n0.5,2,a,0\n1,3,\"b,c\",1\n");

    CHECK_THROWS_AS(feature_matrix_csv({r1}, {"a", "b"}, {0, 1}), std::invalid_argument);
    FeatureVector other{{"x", "z"}, {1.0, 1.0}, {}};
    CHECK_THROWS_AS(feature_matrix_csv({r1, other}, {"a", "b"}, {0, 1}), std::invalid_argument);
}

TEST_CASE("schema descriptors round-trip through JSON") {
    auto schema = FeatureSchema::standard(256);
    auto parsed = nlohmann::json::parse(schema_json(schema));
    REQUIRE(parsed["features"].size() == 37);
    CHECK(parsed["total_arity"] == 791);
    bool saw_tfidf = false;
    for (const auto& f : parsed["features"]) {
        if (f["name"] == "tfidf") {
            saw_tfidf = true;
            CHECK(f["arity"] == 500);
            CHECK(f["category"] == "text_vector");
            CHECK(f["tag"] == "traditional");
        }
    }
    CHECK(saw_tfidf);
}
