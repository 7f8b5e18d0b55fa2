#pragma once

#include <string>
#include <vector>

namespace stylo::corpus {

enum class Category {
    biology, chemistry, geography, history, it, music, politics, religion, sports, visual_arts
};
enum class Klass { human, ai_generated, ai_rephrased };
enum class Variant { none, basic, advanced };

constexpr int kCategoryCount = 10;

const char* to_string(Category c);
const char* to_string(Klass k);
const char* to_string(Variant v);
Category category_from_string(const std::string& s); // all three throw on unknown
Klass klass_from_string(const std::string& s);
Variant variant_from_string(const std::string& s);

struct TextSample {
    std::string id;
    Category category = Category::biology;
    std::string topic_title;
    Klass klass = Klass::human;
    Variant variant = Variant::none;
    std::string body;

    bool operator==(const TextSample&) const = default;
};

// Throws std::invalid_argument when a sample breaks the schema:
// human <=> variant none, and the body may not be blank.
void validate(const TextSample& s);

// Ingestion-time cleanup: CRLF -> LF, trailing whitespace stripped per line,
// and decomposed Latin accents recomposed (a + combining acute -> á). Blank
// runs inside lines survive untouched; they are measured downstream.
std::string normalize_text(std::string_view raw);

// `path` is either a JSONL file (one sample object per line, fields
// id/category/topic_title/class/variant/body) or a directory laid out as
// <class>/<variant>/<category>/<topic>.txt. Throws std::runtime_error naming
// file, line, and field on malformed records, and on duplicate keys.
std::vector<TextSample> load_corpus(const std::string& path);

// JSONL writer; load_corpus(save_corpus(x)) == x.
void save_corpus(const std::vector<TextSample>& samples, const std::string& path);

struct StatsRow {
    Category category = Category::biology;
    Klass klass = Klass::human;
    Variant variant = Variant::none;
    size_t paragraphs = 0;
    size_t sentences = 0;
    size_t words = 0;
};

struct CorpusStats {
    std::vector<StatsRow> rows; // sorted by (category, class, variant)
    const StatsRow* find(Category c, Klass k, Variant v) const;
};

// Aggregates segmentation counts per (category, class, variant) cell.
CorpusStats corpus_stats(const std::vector<TextSample>& samples);
std::string stats_csv(const CorpusStats& stats);

enum class TaskName { basic_generation, basic_rephrase, advanced_generation, advanced_rephrase };
const char* to_string(TaskName t);
TaskName task_from_string(const std::string& s);
constexpr int kTaskCount = 4;

// Which (class, variant) pair forms the positive side of a task.
Klass task_klass(TaskName t);
Variant task_variant(TaskName t);

// AI texts are the positive class (label 1), human the negative (label 0).
struct DetectionTask {
    TaskName name = TaskName::basic_generation;
    std::vector<TextSample> positives;
    std::vector<TextSample> negatives;
};

// Throws std::runtime_error when either side of the task is empty.
DetectionTask build_task(const std::vector<TextSample>& samples, TaskName name);

} // namespace stylo::corpus
