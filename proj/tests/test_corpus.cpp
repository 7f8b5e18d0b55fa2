#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <unistd.h>
#include <vector>

#include "stylodetect/corpus.hpp"

using namespace stylo::corpus;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("stylo_corpus_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int& counter() {
        static int n = 0;
        return n;
    }
};

void write_file(const fs::path& p, const std::string& content) {
    fs::create_directories(p.parent_path());
    std::ofstream out(p);
    out << content;
}

TextSample make_sample(const std::string& id, Category cat, Klass k, Variant v,
                       const std::string& topic, const std::string& body) {
    TextSample s;
    s.id = id;
    s.category = cat;
    s.klass = k;
    s.variant = v;
    s.topic_title = topic;
    s.body = body;
    return s;
}

} // namespace

TEST_CASE("one well-formed jsonl record loads") {
    TempDir dir;
    auto file = dir.path / "corpus.jsonl";
    write_file(file, R"({"id":"h1","category":"biology","topic_title":"Cells","class":"human","variant":"none","body":"Cells divide. They grow."})"
                         "\n");
    auto samples = load_corpus(file.string());
    REQUIRE(samples.size() == 1);
    CHECK(samples[0].id == "h1");
    CHECK(samples[0].category == Category::biology);
    CHECK(samples[0].klass == Klass::human);
    CHECK(samples[0].variant == Variant::none);
    CHECK(samples[0].body == "Cells divide. They grow.");
}

TEST_CASE("schema violations are rejected with file and line") {
    TempDir dir;
    auto file = dir.path / "bad.jsonl";

    SUBCASE("human with a variant") {
        write_file(file, R"({"id":"x","category":"biology","topic_title":"T","class":"human","variant":"basic","body":"Text here."})"
                             "\n");
        CHECK_THROWS_WITH_AS(load_corpus(file.string()),
                             doctest::Contains("bad.jsonl:1"), std::runtime_error);
    }
    SUBCASE("ai without a variant") {
        write_file(file, R"({"id":"x","category":"biology","topic_title":"T","class":"ai_generated","variant":"none","body":"Text here."})"
                             "\n");
        CHECK_THROWS_AS(load_corpus(file.string()), std::runtime_error);
    }
    SUBCASE("missing field names the field") {
        write_file(file, R"({"id":"x","category":"biology","topic_title":"T","class":"human","variant":"none"})"
                             "\n");
        CHECK_THROWS_WITH_AS(load_corpus(file.string()), doctest::Contains("\"body\""),
                             std::runtime_error);
    }
    SUBCASE("unknown category") {
        write_file(file, R"({"id":"x","category":"alchemy","topic_title":"T","class":"human","variant":"none","body":"Text."})"
                             "\n");
        CHECK_THROWS_WITH_AS(load_corpus(file.string()), doctest::Contains("alchemy"),
                             std::runtime_error);
    }
    SUBCASE("blank body") {
        write_file(file, R"({"id":"x","category":"biology","topic_title":"T","class":"human","variant":"none","body":"  \n "})"
                             "\n");
        CHECK_THROWS_AS(load_corpus(file.string()), std::runtime_error);
    }
    SUBCASE("malformed json reports the line") {
        write_file(file, "{\"id\": \"ok\"\n");
        CHECK_THROWS_WITH_AS(load_corpus(file.string()), doctest::Contains(":1"),
                             std::runtime_error);
    }
}

TEST_CASE("duplicate keys are rejected") {
    TempDir dir;
    auto file = dir.path / "dup.jsonl";
    std::string rec1 = R"({"id":"a","category":"music","topic_title":"Jazz","class":"human","variant":"none","body":"One."})";
    std::string rec2 = R"({"id":"b","category":"music","topic_title":"Jazz","class":"human","variant":"none","body":"Two."})";
    write_file(file, rec1 + "\n" + rec2 + "\n");
    CHECK_THROWS_WITH_AS(load_corpus(file.string()), doctest::Contains("duplicate"),
                         std::runtime_error);

    std::string rec3 = R"({"id":"a","category":"music","topic_title":"Blues","class":"human","variant":"none","body":"Three."})";
    write_file(file, rec1 + "\n" + rec3 + "\n");
    CHECK_THROWS_WITH_AS(load_corpus(file.string()), doctest::Contains("duplicate"),
                         std::runtime_error);
}

TEST_CASE("save then load is the identity") {
    std::vector<TextSample> samples = {
        make_sample("h1", Category::history, Klass::human, Variant::none, "Rome",
                    "Rome rose. Rome fell.\n\nIt left ruins."),
        make_sample("g1", Category::history, Klass::ai_generated, Variant::basic, "Rome",
                    "Rome was a city. It had an empire."),
        make_sample("r1", Category::sports, Klass::ai_rephrased, Variant::advanced, "Tennis",
                    "Tennis is played with rackets — and “nets”."),
    };
    TempDir dir;
    auto file = dir.path / "round.jsonl";
    save_corpus(samples, file.string());
    auto loaded = load_corpus(file.string());
    CHECK(loaded == samples);
}

TEST_CASE("directory layout ingestion") {
    TempDir dir;
    write_file(dir.path / "human/none/biology/Cell_Division.txt", "Cells divide. They grow.\n");
    write_file(dir.path / "ai_generated/basic/biology/Cell_Division.txt",
               "Cell division is a process. It is important.\n");
    write_file(dir.path / "ai_rephrased/advanced/music/Jazz.txt", "Jazz swings. It improvises.\n");
    auto samples = load_corpus(dir.path.string());
    REQUIRE(samples.size() == 3);
    auto by_id = [&](const std::string& id) {
        auto it = std::find_if(samples.begin(), samples.end(),
                               [&](const TextSample& s) { return s.id == id; });
        REQUIRE(it != samples.end());
        return *it;
    };
    auto h = by_id("human/none/biology/Cell_Division");
    CHECK(h.klass == Klass::human);
    CHECK(h.variant == Variant::none);
    CHECK(h.topic_title == "Cell Division");
    auto r = by_id("ai_rephrased/advanced/music/Jazz");
    CHECK(r.category == Category::music);
    CHECK(r.variant == Variant::advanced);

    SUBCASE("stray layout errors") {
        write_file(dir.path / "human/none/misplaced.txt", "Oops.");
        CHECK_THROWS_AS(load_corpus(dir.path.string()), std::runtime_error);
    }
}

TEST_CASE("normalize_text") {
    CHECK(normalize_text("a\r\nb\r\n") == "a\nb\n");
    CHECK(normalize_text("line   \nnext\t\n") == "line\nnext\n");
    CHECK(normalize_text("keep  inner   blanks") == "keep  inner   blanks");
    // e + combining acute composes to a single codepoint
    CHECK(normalize_text("caf\x65\xcc\x81") == "caf\xc3\xa9");
    CHECK(normalize_text("n\xcc\x83o") == "\xc3\xb1o");
    // unrelated combining marks pass through
    std::string odd = "x\xcc\xa7"; // x + combining cedilla has no composition here
    CHECK(normalize_text(odd) == odd);
}

TEST_CASE("missing path errors") {
    CHECK_THROWS_AS(load_corpus("/no/such/corpus.jsonl"), std::runtime_error);
}

TEST_CASE("stats: single one-sentence sample") {
    auto s = make_sample("h1", Category::it, Klass::human, Variant::none, "Routers",
                         "Hello world.");
    auto stats = corpus_stats({s});
    REQUIRE(stats.rows.size() == 1);
    CHECK(stats.rows[0].paragraphs == 1);
    CHECK(stats.rows[0].sentences == 1);
    CHECK(stats.rows[0].words == 2);
}

TEST_CASE("stats: blank line makes two paragraphs") {
    auto s = make_sample("h1", Category::it, Klass::human, Variant::none, "Routers",
                         "First block here.\n\nSecond block there.");
    auto stats = corpus_stats({s});
    REQUIRE(stats.rows.size() == 1);
    CHECK(stats.rows[0].paragraphs == 2);
    CHECK(stats.rows[0].sentences == 2);
    CHECK(stats.rows[0].words == 6);
}

TEST_CASE("stats aggregate per cell and are permutation invariant") {
    std::vector<TextSample> samples = {
        make_sample("h1", Category::biology, Klass::human, Variant::none, "Cells",
                    "One sentence. Two sentences."),
        make_sample("h2", Category::biology, Klass::human, Variant::none, "Plants",
                    "Plants grow tall.\n\nThey need light."),
        make_sample("g1", Category::biology, Klass::ai_generated, Variant::basic, "Cells",
                    "Cells are small."),
        make_sample("h3", Category::music, Klass::human, Variant::none, "Jazz", "Jazz swings."),
    };
    auto stats = corpus_stats(samples);
    REQUIRE(stats.rows.size() == 3);
    const auto* bio_h = stats.find(Category::biology, Klass::human, Variant::none);
    REQUIRE(bio_h != nullptr);
    CHECK(bio_h->paragraphs == 3);
    CHECK(bio_h->sentences == 4);
    CHECK(bio_h->words == 10);
    const auto* bio_g = stats.find(Category::biology, Klass::ai_generated, Variant::basic);
    REQUIRE(bio_g != nullptr);
    CHECK(bio_g->words == 3);

    std::mt19937 rng(7);
    for (int trial = 0; trial < 5; ++trial) {
        std::shuffle(samples.begin(), samples.end(), rng);
        auto again = corpus_stats(samples);
        REQUIRE(again.rows.size() == stats.rows.size());
        for (size_t i = 0; i < again.rows.size(); ++i) {
            CHECK(again.rows[i].words == stats.rows[i].words);
            CHECK(again.rows[i].sentences == stats.rows[i].sentences);
            CHECK(again.rows[i].paragraphs == stats.rows[i].paragraphs);
        }
    }

    auto csv = stats_csv(stats);
    CHECK(csv.rfind("category,class,variant,paragraphs,sentences,words\n", 0) == 0);
    CHECK(csv.find("biology,human,none,3,4,10\n") != std::string::npos);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4); // header + 3 rows
}

TEST_CASE("build_task filters by class and variant") {
    std::vector<TextSample> samples;
    auto body = [](int i) { return "Body number " + std::to_string(i) + " goes here."; };
    int n = 0;
    for (int i = 0; i < 3; ++i)
        samples.push_back(make_sample("h" + std::to_string(i), Category::biology, Klass::human,
                                      Variant::none, "T" + std::to_string(i), body(n++)));
    for (Klass k : {Klass::ai_generated, Klass::ai_rephrased})
        for (Variant v : {Variant::basic, Variant::advanced})
            for (int i = 0; i < 2; ++i)
                samples.push_back(make_sample(std::string(to_string(k)) + to_string(v) +
                                                  std::to_string(i),
                                              Category::biology, k, v, "T" + std::to_string(i),
                                              body(n++)));

    auto t1 = build_task(samples, TaskName::basic_generation);
    CHECK(t1.positives.size() == 2);
    CHECK(t1.negatives.size() == 3);
    for (const auto& p : t1.positives) {
        CHECK(p.klass == Klass::ai_generated);
        CHECK(p.variant == Variant::basic);
    }

    auto t4 = build_task(samples, TaskName::advanced_rephrase);
    for (const auto& p : t4.positives) {
        CHECK(p.klass == Klass::ai_rephrased);
        CHECK(p.variant == Variant::advanced);
    }

    // the human side is identical across all four tasks
    auto t2 = build_task(samples, TaskName::basic_rephrase);
    auto t3 = build_task(samples, TaskName::advanced_generation);
    CHECK(t1.negatives == t2.negatives);
    CHECK(t2.negatives == t3.negatives);
    CHECK(t3.negatives == t4.negatives);
}

TEST_CASE("build_task errors when a side is missing") {
    std::vector<TextSample> humans_only = {make_sample(
        "h", Category::biology, Klass::human, Variant::none, "T", "Just one human text here.")};
    CHECK_THROWS_AS(build_task(humans_only, TaskName::basic_generation), std::runtime_error);
    std::vector<TextSample> ai_only = {make_sample("g", Category::biology, Klass::ai_generated,
                                                   Variant::basic, "T", "Only machine text.")};
    CHECK_THROWS_AS(build_task(ai_only, TaskName::basic_generation), std::runtime_error);
}

TEST_CASE("enum string round-trips") {
    for (int i = 0; i < kCategoryCount; ++i) {
        auto c = static_cast<Category>(i);
        CHECK(category_from_string(to_string(c)) == c);
    }
    for (auto k : {Klass::human, Klass::ai_generated, Klass::ai_rephrased})
        CHECK(klass_from_string(to_string(k)) == k);
    for (auto v : {Variant::none, Variant::basic, Variant::advanced})
        CHECK(variant_from_string(to_string(v)) == v);
    for (int i = 0; i < kTaskCount; ++i) {
        auto t = static_cast<TaskName>(i);
        CHECK(task_from_string(to_string(t)) == t);
    }
    CHECK_THROWS_AS(category_from_string("astrology"), std::invalid_argument);
    CHECK_THROWS_AS(task_from_string("detect_everything"), std::invalid_argument);
}
