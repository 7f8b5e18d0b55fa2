#include "stylodetect/corpus.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "stylodetect/textproc.hpp"
#include "stylodetect/util.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace stylo::corpus {

namespace {

const char* const kCategoryNames[] = {"biology",  "chemistry", "geography", "history",
                                      "it",       "music",     "politics",  "religion",
                                      "sports",   "visual_arts"};
const char* const kKlassNames[] = {"human", "ai_generated", "ai_rephrased"};
const char* const kVariantNames[] = {"none", "basic", "advanced"};
const char* const kTaskNames[] = {"basic_generation", "basic_rephrase", "advanced_generation",
                                  "advanced_rephrase"};

template <typename Enum, size_t N>
Enum enum_from_string(const std::string& s, const char* const (&names)[N], const char* what) {
    for (size_t i = 0; i < N; ++i)
        if (s == names[i]) return static_cast<Enum>(i);
    throw std::invalid_argument(std::string("unknown ") + what + ": \"" + s + "\"");
}

} // namespace

const char* to_string(Category c) { return kCategoryNames[static_cast<int>(c)]; }
const char* to_string(Klass k) { return kKlassNames[static_cast<int>(k)]; }
const char* to_string(Variant v) { return kVariantNames[static_cast<int>(v)]; }
const char* to_string(TaskName t) { return kTaskNames[static_cast<int>(t)]; }

Category category_from_string(const std::string& s) {
    return enum_from_string<Category>(s, kCategoryNames, "category");
}
Klass klass_from_string(const std::string& s) {
    return enum_from_string<Klass>(s, kKlassNames, "class");
}
Variant variant_from_string(const std::string& s) {
    return enum_from_string<Variant>(s, kVariantNames, "variant");
}
TaskName task_from_string(const std::string& s) {
    return enum_from_string<TaskName>(s, kTaskNames, "task");
}

void validate(const TextSample& s) {
    if ((s.klass == Klass::human) != (s.variant == Variant::none))
        throw std::invalid_argument("sample \"" + s.id + "\": class " + to_string(s.klass) +
                                    " cannot have variant " + to_string(s.variant));
    if (trim(s.body).empty())
        throw std::invalid_argument("sample \"" + s.id + "\": empty body");
    if (s.id.empty()) throw std::invalid_argument("sample with empty id");
    if (trim(s.topic_title).empty())
        throw std::invalid_argument("sample \"" + s.id + "\": empty topic_title");
}

std::string normalize_text(std::string_view raw) {
    // Pass 1: recompose base letter + combining accent pairs.
    static const std::map<std::pair<uint32_t, uint32_t>, uint32_t> compose = {
        {{'a', 0x300}, 0xE0}, {{'a', 0x301}, 0xE1}, {{'a', 0x302}, 0xE2}, {{'a', 0x303}, 0xE3},
        {{'a', 0x308}, 0xE4}, {{'a', 0x30A}, 0xE5}, {{'e', 0x300}, 0xE8}, {{'e', 0x301}, 0xE9},
        {{'e', 0x302}, 0xEA}, {{'e', 0x308}, 0xEB}, {{'i', 0x300}, 0xEC}, {{'i', 0x301}, 0xED},
        {{'i', 0x302}, 0xEE}, {{'i', 0x308}, 0xEF}, {{'o', 0x300}, 0xF2}, {{'o', 0x301}, 0xF3},
        {{'o', 0x302}, 0xF4}, {{'o', 0x303}, 0xF5}, {{'o', 0x308}, 0xF6}, {{'u', 0x300}, 0xF9},
        {{'u', 0x301}, 0xFA}, {{'u', 0x302}, 0xFB}, {{'u', 0x308}, 0xFC}, {{'y', 0x301}, 0xFD},
        {{'y', 0x308}, 0xFF}, {{'n', 0x303}, 0xF1}, {{'c', 0x327}, 0xE7},
        {{'A', 0x300}, 0xC0}, {{'A', 0x301}, 0xC1}, {{'A', 0x302}, 0xC2}, {{'A', 0x303}, 0xC3},
        {{'A', 0x308}, 0xC4}, {{'A', 0x30A}, 0xC5}, {{'E', 0x300}, 0xC8}, {{'E', 0x301}, 0xC9},
        {{'E', 0x302}, 0xCA}, {{'E', 0x308}, 0xCB}, {{'I', 0x300}, 0xCC}, {{'I', 0x301}, 0xCD},
        {{'I', 0x302}, 0xCE}, {{'I', 0x308}, 0xCF}, {{'O', 0x300}, 0xD2}, {{'O', 0x301}, 0xD3},
        {{'O', 0x302}, 0xD4}, {{'O', 0x303}, 0xD5}, {{'O', 0x308}, 0xD6}, {{'U', 0x300}, 0xD9},
        {{'U', 0x301}, 0xDA}, {{'U', 0x302}, 0xDB}, {{'U', 0x308}, 0xDC}, {{'Y', 0x301}, 0xDD},
        {{'N', 0x303}, 0xD1}, {{'C', 0x327}, 0xC7},
    };
    std::string composed;
    composed.reserve(raw.size());
    size_t i = 0;
    uint32_t pending = 0;
    bool have_pending = false;
    while (i < raw.size()) {
        uint32_t cp = utf8_decode(raw, i);
        if (have_pending) {
            auto it = compose.find({pending, cp});
            if (it != compose.end()) {
                utf8_encode(it->second, composed);
                have_pending = false;
                continue;
            }
            utf8_encode(pending, composed);
            have_pending = false;
        }
        // only plain ASCII letters act as composition bases
        if (cp < 0x80 && ascii_alpha(static_cast<char>(cp))) {
            pending = cp;
            have_pending = true;
        } else {
            utf8_encode(cp, composed);
        }
    }
    if (have_pending) utf8_encode(pending, composed);

    // Pass 2: line endings and trailing whitespace.
    std::string out;
    out.reserve(composed.size());
    std::string line;
    auto flush_line = [&](bool newline) {
        size_t e = line.size();
        while (e > 0 && (line[e - 1] == ' ' || line[e - 1] == '\t' || line[e - 1] == '\r')) --e;
        out.append(line, 0, e);
        if (newline) out.push_back('\n');
        line.clear();
    };
    for (char c : composed) {
        if (c == '\n') {
            flush_line(true);
        } else {
            line.push_back(c);
        }
    }
    if (!line.empty()) flush_line(false);
    return out;
}

namespace {

std::string dup_key(const TextSample& s) {
    return std::string(to_string(s.category)) + "|" + s.topic_title + "|" + to_string(s.klass) +
           "|" + to_string(s.variant);
}

TextSample parse_record(const json& rec, const std::string& file, size_t line_no) {
    auto where = [&](const std::string& field) {
        return file + ":" + std::to_string(line_no) + ": field \"" + field + "\"";
    };
    if (!rec.is_object())
        throw std::runtime_error(file + ":" + std::to_string(line_no) + ": record is not an object");
    auto get = [&](const char* field) -> std::string {
        if (!rec.contains(field)) throw std::runtime_error(where(field) + " missing");
        if (!rec.at(field).is_string()) throw std::runtime_error(where(field) + " is not a string");
        return rec.at(field).get<std::string>();
    };
    TextSample s;
    s.id = get("id");
    s.topic_title = get("topic_title");
    s.body = normalize_text(get("body"));
    try {
        s.category = category_from_string(get("category"));
        s.klass = klass_from_string(get("class"));
        s.variant = variant_from_string(get("variant"));
        validate(s);
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(file + ":" + std::to_string(line_no) + ": " + e.what());
    }
    return s;
}

std::vector<TextSample> load_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open corpus file: " + path);
    std::vector<TextSample> samples;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        json rec;
        try {
            rec = json::parse(line);
        } catch (const json::parse_error& e) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
        samples.push_back(parse_record(rec, path, line_no));
    }
    return samples;
}

std::vector<TextSample> load_directory(const std::string& path) {
    std::vector<TextSample> samples;
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(path)) {
        if (entry.is_regular_file() && entry.path().extension() == ".txt")
            files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& file : files) {
        fs::path rel = fs::relative(file, path);
        std::vector<std::string> parts;
        for (const auto& p : rel) parts.push_back(p.string());
        if (parts.size() != 4)
            throw std::runtime_error(file.string() +
                                     ": expected <class>/<variant>/<category>/<topic>.txt");
        TextSample s;
        try {
            s.klass = klass_from_string(parts[0]);
            s.variant = variant_from_string(parts[1]);
            s.category = category_from_string(parts[2]);
        } catch (const std::invalid_argument& e) {
            throw std::runtime_error(file.string() + ": " + e.what());
        }
        std::string stem = file.stem().string();
        std::replace(stem.begin(), stem.end(), '_', ' ');
        s.topic_title = stem;
        s.id = rel.string().substr(0, rel.string().size() - 4); // drop ".txt"
        std::ifstream in(file);
        if (!in) throw std::runtime_error("cannot open " + file.string());
        std::stringstream buf;
        buf << in.rdbuf();
        s.body = normalize_text(buf.str());
        try {
            validate(s);
        } catch (const std::invalid_argument& e) {
            throw std::runtime_error(file.string() + ": " + e.what());
        }
        samples.push_back(std::move(s));
    }
    return samples;
}

} // namespace

std::vector<TextSample> load_corpus(const std::string& path) {
    if (!fs::exists(path)) throw std::runtime_error("corpus path does not exist: " + path);
    std::vector<TextSample> samples =
        fs::is_directory(path) ? load_directory(path) : load_jsonl(path);

    std::set<std::string> ids, keys;
    for (const auto& s : samples) {
        if (!ids.insert(s.id).second)
            throw std::runtime_error("duplicate sample id: \"" + s.id + "\"");
        if (!keys.insert(dup_key(s)).second)
            throw std::runtime_error("duplicate sample key (category, topic, class, variant): " +
                                     dup_key(s));
    }
    return samples;
}

void save_corpus(const std::vector<TextSample>& samples, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write corpus file: " + path);
    for (const auto& s : samples) {
        json rec;
        rec["id"] = s.id;
        rec["category"] = to_string(s.category);
        rec["topic_title"] = s.topic_title;
        rec["class"] = to_string(s.klass);
        rec["variant"] = to_string(s.variant);
        rec["body"] = s.body;
        out << rec.dump() << "\n";
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

const StatsRow* CorpusStats::find(Category c, Klass k, Variant v) const {
    for (const auto& r : rows)
        if (r.category == c && r.klass == k && r.variant == v) return &r;
    return nullptr;
}

CorpusStats corpus_stats(const std::vector<TextSample>& samples) {
    if (samples.empty()) throw std::invalid_argument("corpus_stats: no samples");
    std::map<std::tuple<int, int, int>, StatsRow> cells;
    for (const auto& s : samples) {
        auto key = std::make_tuple(static_cast<int>(s.category), static_cast<int>(s.klass),
                                   static_cast<int>(s.variant));
        auto& row = cells[key];
        row.category = s.category;
        row.klass = s.klass;
        row.variant = s.variant;
        auto doc = text::structure(s.body);
        row.paragraphs += doc.paragraphs.size();
        row.sentences += doc.sentence_count();
        row.words += doc.word_count();
    }
    CorpusStats stats;
    for (auto& [key, row] : cells) stats.rows.push_back(row);
    return stats;
}

std::string stats_csv(const CorpusStats& stats) {
    std::string out = "category,class,variant,paragraphs,sentences,words\n";
    for (const auto& r : stats.rows) {
        out += std::string(to_string(r.category)) + "," + to_string(r.klass) + "," +
               to_string(r.variant) + "," + std::to_string(r.paragraphs) + "," +
               std::to_string(r.sentences) + "," + std::to_string(r.words) + "\n";
    }
    return out;
}

Klass task_klass(TaskName t) {
    return (t == TaskName::basic_generation || t == TaskName::advanced_generation)
               ? Klass::ai_generated
               : Klass::ai_rephrased;
}

Variant task_variant(TaskName t) {
    return (t == TaskName::basic_generation || t == TaskName::basic_rephrase) ? Variant::basic
                                                                              : Variant::advanced;
}

DetectionTask build_task(const std::vector<TextSample>& samples, TaskName name) {
    DetectionTask task;
    task.name = name;
    Klass k = task_klass(name);
    Variant v = task_variant(name);
    for (const auto& s : samples) {
        if (s.klass == Klass::human)
            task.negatives.push_back(s);
        else if (s.klass == k && s.variant == v)
            task.positives.push_back(s);
    }
    if (task.positives.empty())
        throw std::runtime_error(std::string("task ") + to_string(name) + ": no " + to_string(k) +
                                 "/" + to_string(v) + " samples in corpus");
    if (task.negatives.empty())
        throw std::runtime_error(std::string("task ") + to_string(name) +
                                 ": no human samples in corpus");
    return task;
}

} // namespace stylo::corpus
