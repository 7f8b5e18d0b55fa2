#include <algorithm>
#include <array>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "sample_corpus.hpp"
#include "stylodetect/clients.hpp"
#include "stylodetect/rand.hpp"

namespace stylo::testgen {

namespace {

// ---------------------------------------------------------------------------
// Vocabulary. Every word below is in the bundled spelling dictionary so the
// rule-based grammar checker only charges the slips we inject deliberately.

const std::vector<std::string> kFunction = {
    "the", "of", "and", "in", "to", "with", "for", "on", "as", "by",
    "from", "that", "while", "through", "between", "across", "within", "under",
    "over", "during"};

const std::vector<std::string> kNouns = {
    "system",   "process", "structure", "pattern",  "model",    "method",
    "approach", "result",  "effect",    "change",   "development", "research",
    "study",    "analysis", "theory",   "concept",  "practice", "field",
    "form",     "group",   "period",    "region",   "source",   "level",
    "value",    "part",    "role",      "work",     "idea",     "example",
    "feature",  "function", "material", "element",  "factor",   "state",
    "condition", "property", "relation", "context"};

const std::vector<std::string> kVerbs = {
    "shows",    "describes", "explains",  "involves",  "includes", "requires",
    "produces", "creates",   "forms",     "develops",  "provides", "supports",
    "reflects", "influences", "determines", "represents", "combines", "follows",
    "remains",  "becomes",   "appears",   "depends",   "contains", "suggests"};

const std::vector<std::string> kAdjectives = {
    "important", "common",  "complex",  "simple",    "general", "specific",
    "early",     "modern",  "major",    "central",   "basic",   "notable",
    "typical",   "unique",  "various",  "distinct",  "essential", "practical",
    "natural",   "broad",   "remarkable", "impressive", "fine",  "significant"};

// Low-frequency vocabulary reserved for human (and lightly for rephrased)
// texts; under a language model fitted on human text these stay rare, which
// keeps human perplexity above the formulaic AI texts.
const std::vector<std::string> kRareNouns = {
    "paradox", "anomaly",  "quirk",   "nuance",  "facet",   "tapestry",
    "mosaic",  "spectrum", "cascade", "threshold", "juncture", "pinnacle",
    "flux",    "surge",    "ripple",  "tremor",  "echo",    "whisper",
    "murmur",  "lull",     "drift",   "sway",    "blend",   "maze",
    "riddle",  "puzzle",   "streak",  "cluster", "fringe",  "margin",
    "crest",   "trough",   "seam",    "thread",  "strand",  "knot",
    "loop",    "arc",      "curve",   "bend",    "fold",    "crease",
    "notch",   "groove",   "ridge",   "slope",   "ledge",   "shard"};

const std::vector<std::string> kRareVerbs = {
    "wanders",   "lingers",   "flourishes", "withers",    "erupts",     "subsides",
    "emerges",   "vanishes",  "persists",   "fluctuates", "oscillates", "converges",
    "diverges",  "permeates", "illuminates", "obscures",  "reshapes",   "redefines",
    "unfolds",   "unravels",  "punctuates", "reverberates", "dissolves", "magnifies",
    "diminishes", "tempers"};

const std::vector<std::string> kRareAdjectives = {
    "intricate", "nuanced",  "peculiar", "subtle",   "obscure",  "vivid",
    "profound",  "elaborate", "curious", "delicate", "austere",  "luminous",
    "fragile",   "resilient", "sprawling", "jagged", "serene",   "turbulent",
    "pristine",  "weathered", "ornate",  "rustic",   "somber",   "radiant",
    "fleeting",  "enduring", "scattered", "tangled", "woven",    "layered",
    "blended",   "carved",   "polished", "rugged",   "slender",  "sturdy",
    "hollow",    "dense",    "sparse",   "abundant", "scarce",   "faint",
    "coarse",    "brittle",  "supple",   "murky",    "crisp",    "stark"};

// Single-token discourse markers (all in the bundled marker list).
const std::vector<std::string> kMarkers = {
    "however", "moreover", "furthermore", "therefore", "nevertheless",
    "meanwhile", "similarly", "instead", "indeed", "notably"};

// Vowel-initial nouns for the deliberate "a <vowel>" slips.
const std::vector<std::string> kVowelNouns = {
    "element", "example", "approach", "analysis", "effect",
    "idea",    "area",    "object",   "order",    "image"};

const std::vector<std::string> kTitleAdjectives = {
    "ancient", "modern", "hidden", "northern", "early",
    "famous",  "golden", "quiet",  "living",   "distant"};

const std::array<std::vector<std::string>, corpus::kCategoryCount> kCategoryNouns = {{
    {"cells", "species", "organisms", "evolution", "genetics", "proteins", "tissues",
     "bacteria", "enzymes", "molecules", "habitats", "diversity", "reproduction",
     "metabolism", "organs", "populations", "adaptation", "membranes", "genes", "growth"},
    {"atoms", "reactions", "compounds", "elements", "bonds", "acids", "solutions",
     "metals", "gases", "crystals", "catalysts", "oxidation", "polymers", "mixtures",
     "electrons", "isotopes", "salts", "solvents", "ions", "equations"},
    {"mountains", "rivers", "climate", "regions", "continents", "oceans", "deserts",
     "valleys", "glaciers", "erosion", "landscapes", "borders", "territories",
     "islands", "plains", "volcanoes", "rainfall", "terrain", "coasts", "basins"},
    {"empires", "wars", "revolutions", "dynasties", "treaties", "kingdoms",
     "conquests", "civilizations", "monarchs", "rebellions", "colonies", "reforms",
     "chronicles", "archives", "battles", "rulers", "emperors", "campaigns",
     "alliances", "settlements"},
    {"computers", "software", "networks", "algorithms", "databases", "programming",
     "hardware", "servers", "protocols", "encryption", "interfaces", "processors",
     "storage", "compilers", "routers", "browsers", "keyboards", "files", "code",
     "machines"},
    {"melodies", "harmony", "rhythm", "composers", "orchestras", "instruments",
     "symphonies", "concerts", "performances", "genres", "songs", "chords",
     "notation", "opera", "choirs", "recordings", "albums", "musicians", "tempo",
     "scales"},
    {"governments", "elections", "parliaments", "policies", "parties", "democracy",
     "constitutions", "legislation", "voters", "campaigns", "ministers", "senates",
     "coalitions", "referendums", "diplomacy", "debates", "citizens", "laws",
     "courts", "budgets"},
    {"temples", "rituals", "beliefs", "scriptures", "prayers", "churches",
     "monasteries", "doctrines", "worship", "festivals", "priests", "traditions",
     "faith", "monks", "shrines", "theology", "ceremonies", "sects", "pilgrims",
     "sermons"},
    {"athletes", "tournaments", "championships", "leagues", "teams", "matches",
     "stadiums", "players", "training", "competitions", "records", "medals",
     "coaches", "seasons", "clubs", "victories", "scores", "referees", "trophies",
     "fans"},
    {"paintings", "sculptures", "galleries", "portraits", "exhibitions", "artists",
     "museums", "drawings", "colors", "styles", "compositions", "murals", "sketches",
     "prints", "canvases", "pigments", "textures", "frames", "motifs", "collections"},
}};

// ---------------------------------------------------------------------------
// Per-cell paragraph/sentence/word totals (10 texts per cell).

struct CellTarget {
    int paragraphs, sentences, words;
};

struct CategoryTargets {
    CellTarget human, gen_basic, reph_basic, gen_advanced, reph_advanced;
};

const std::array<CategoryTargets, corpus::kCategoryCount> kTargets = {{
    {{44, 188, 3739}, {54, 139, 2500}, {21, 96, 1899}, {47, 111, 2057}, {18, 79, 1487}},
    {{44, 167, 3590}, {56, 140, 2684}, {28, 129, 2539}, {48, 124, 2374}, {22, 103, 1859}},
    {{35, 167, 3386}, {60, 167, 3006}, {27, 114, 2540}, {49, 136, 2575}, {24, 106, 2028}},
    {{43, 189, 4578}, {61, 148, 3017}, {26, 146, 3205}, {52, 132, 2583}, {22, 113, 2415}},
    {{40, 141, 2916}, {51, 129, 2624}, {24, 91, 1872}, {51, 128, 2538}, {16, 86, 1541}},
    {{39, 191, 4177}, {53, 154, 2701}, {27, 137, 2900}, {48, 128, 2426}, {21, 109, 2145}},
    {{43, 172, 4298}, {56, 131, 2866}, {25, 104, 2341}, {52, 127, 2672}, {25, 111, 2300}},
    {{40, 171, 3796}, {51, 138, 2684}, {25, 108, 2409}, {48, 122, 2623}, {28, 120, 2488}},
    {{51, 204, 4692}, {59, 143, 2904}, {30, 128, 2913}, {53, 143, 2685}, {31, 118, 2407}},
    {{36, 147, 3165}, {54, 136, 2686}, {22, 85, 2024}, {43, 119, 2238}, {23, 95, 1931}},
}};

// ---------------------------------------------------------------------------
// Class texture knobs.

struct Style {
    size_t noun_span, verb_span, adj_span; // pool prefix in use
    bool skew;                             // squash draws toward the front
    double rare_rate;                      // content word from the rare pools
    double topic_rate;                     // noun from the category pool
    double marker_rate;                    // sentence opens with a marker
    double quote_texts;                    // fraction of texts with quotes
    int max_quotes;
    double slip_texts; // fraction of texts with grammar slips
    int max_slips;
    double blank_texts; // fraction of texts with a doubled space
};

const Style kHumanStyle = {40, 24, 24, false, 0.20, 0.30, 0.12, 0.85, 2, 0.75, 3, 0.35};
const Style kGenBasicStyle = {8, 8, 8, true, 0.00, 0.25, 0.03, 0.04, 1, 0.00, 0, 0.00};
const Style kGenAdvancedStyle = {14, 12, 12, true, 0.02, 0.30, 0.06, 0.10, 1, 0.00, 0, 0.00};
const Style kRephBasicStyle = {12, 10, 10, true, 0.05, 0.35, 0.05, 0.15, 1, 0.10, 1, 0.05};
const Style kRephAdvancedStyle = {16, 12, 12, true, 0.08, 0.35, 0.08, 0.20, 1, 0.15, 1, 0.08};

const Style& style_for(corpus::Klass k, corpus::Variant v) {
    if (k == corpus::Klass::human) return kHumanStyle;
    if (k == corpus::Klass::ai_generated)
        return v == corpus::Variant::basic ? kGenBasicStyle : kGenAdvancedStyle;
    return v == corpus::Variant::basic ? kRephBasicStyle : kRephAdvancedStyle;
}

// ---------------------------------------------------------------------------
// Count bookkeeping.

// total split into `parts` nonnegative integers that sum exactly, base +- 1.
std::vector<int> split_total(int total, int parts, Rng& rng) {
    std::vector<int> out(parts, total / parts);
    int rem = total % parts;
    std::vector<size_t> order(parts);
    for (int i = 0; i < parts; ++i) order[i] = static_cast<size_t>(i);
    rng.shuffle(order);
    for (int i = 0; i < rem; ++i) ++out[order[i]];
    return out;
}

// Spread sentence lengths away from the flat split while conserving the sum.
void jitter_lengths(std::vector<int>& lens, Rng& rng) {
    for (size_t i = 0, j = lens.size(); i + 1 < j; ++i) {
        --j;
        int d = static_cast<int>(rng.index(7)) - 3;
        if (lens[i] + d >= 6 && lens[i] + d <= 34 && lens[j] - d >= 6 && lens[j] - d <= 34) {
            lens[i] += d;
            lens[j] -= d;
        }
    }
}

bool is_function_word(const std::string& w) {
    return std::find(kFunction.begin(), kFunction.end(), w) != kFunction.end();
}

std::string capitalized(std::string w) {
    if (!w.empty() && w[0] >= 'a' && w[0] <= 'z') w[0] = static_cast<char>(w[0] - 'a' + 'A');
    return w;
}

// ---------------------------------------------------------------------------
// Text composer.

class TextBuilder {
public:
    TextBuilder(Rng& rng, const Style& st, const std::vector<std::string>& topic_pool)
        : rng_(&rng), st_(&st), topic_(&topic_pool) {}

    // One paragraph: `lens` gives the exact word count of each sentence.
    std::string paragraph(const std::vector<int>& lens, bool doubled_space) {
        std::string out;
        for (size_t i = 0; i < lens.size(); ++i) {
            if (i > 0) out += doubled_space && i == 1 ? "  " : " ";
            out += sentence(lens[i]);
        }
        return out;
    }

    // Wraps two adjacent bare words of `s` in straight quotes; returns false
    // when no clean spot exists.
    static bool add_quote(std::string& s, Rng& rng);

    // Injects one grammar slip (doubled word or "a" + vowel) into `s`.
    static bool add_slip(std::string& s, Rng& rng);

private:
    size_t pick(size_t span) {
        if (!st_->skew) return rng_->index(span);
        double u = rng_->uniform();
        return static_cast<size_t>(u * u * static_cast<double>(span));
    }

    // Never returns the previous word, so the only doubled words in any text
    // are the slips injected on purpose.
    std::string from(const std::vector<std::string>& pool, size_t start) {
        size_t i = start % pool.size();
        while (pool[i] == last_) i = (i + 1) % pool.size();
        last_ = pool[i];
        return last_;
    }

    std::string draw(const std::vector<std::string>& pool, const std::vector<std::string>& rare,
                     size_t span) {
        if (st_->rare_rate > 0 && rng_->uniform() < st_->rare_rate)
            return from(rare, rng_->index(rare.size()));
        return from(pool, pick(std::min(span, pool.size())));
    }

    std::string noun() {
        if (rng_->uniform() < st_->topic_rate) return from(*topic_, rng_->index(topic_->size()));
        return draw(kNouns, kRareNouns, st_->noun_span);
    }
    std::string verb() { return draw(kVerbs, kRareVerbs, st_->verb_span); }
    std::string adj() { return draw(kAdjectives, kRareAdjectives, st_->adj_span); }

    std::string sentence(int n);

    Rng* rng_;
    const Style* st_;
    const std::vector<std::string>* topic_;
    std::string last_;
};

std::string TextBuilder::sentence(int n) {
    std::vector<std::string> w;
    w.reserve(static_cast<size_t>(n));
    bool marker = n >= 8 && rng_->uniform() < st_->marker_rate;
    if (marker) w.push_back(kMarkers[rng_->index(kMarkers.size())]);
    w.push_back("the");
    w.push_back(noun());
    while (w.size() < static_cast<size_t>(n)) {
        switch (rng_->index(8)) {
            case 0: w.push_back("of"); w.push_back("the"); w.push_back(noun()); break;
            case 1: w.push_back(verb()); w.push_back("the"); w.push_back(adj()); w.push_back(noun()); break;
            case 2: w.push_back("and"); w.push_back(verb()); w.push_back("the"); w.push_back(noun()); break;
            case 3: w.push_back("in"); w.push_back("the"); w.push_back(adj()); w.push_back(noun()); break;
            case 4: w.push_back("with"); w.push_back(adj()); w.push_back(noun()); break;
            case 5: w.push_back("while"); w.push_back("the"); w.push_back(noun()); w.push_back(verb()); break;
            case 6:
                w.push_back("between"); w.push_back("the"); w.push_back(noun());
                w.push_back("and"); w.push_back("the"); w.push_back(noun());
                break;
            default: w.push_back(verb()); w.push_back(adj()); w.push_back(noun()); break;
        }
    }
    w.resize(static_cast<size_t>(n));
    if (is_function_word(w.back())) {
        last_ = w.size() >= 2 ? w[w.size() - 2] : std::string();
        w.back() = noun();
    }
    if (marker) w[0] += ",";
    size_t next_comma = 6;
    for (size_t i = next_comma; i + 1 < w.size(); ) {
        if (w[i].back() != ',') w[i] += ",";
        i += 6 + rng_->index(4);
    }
    w[0] = capitalized(w[0]);
    std::string out;
    for (size_t i = 0; i < w.size(); ++i) {
        if (i > 0) out += " ";
        out += w[i];
    }
    out += ".";
    return out;
}

// Splits a rendered sentence back into space-separated chunks.
std::vector<std::string> chunks_of(const std::string& s) {
    std::vector<std::string> out;
    size_t start = 0;
    for (size_t i = 0; i <= s.size(); ++i)
        if (i == s.size() || s[i] == ' ') {
            if (i > start) out.push_back(s.substr(start, i - start));
            start = i + 1;
        }
    return out;
}

bool bare_word(const std::string& c) {
    for (char ch : c)
        if (!(ch >= 'a' && ch <= 'z')) return false;
    return true;
}

std::string join_chunks(const std::vector<std::string>& c) {
    std::string out;
    for (size_t i = 0; i < c.size(); ++i) {
        if (i > 0) out += " ";
        out += c[i];
    }
    return out;
}

bool TextBuilder::add_quote(std::string& s, Rng& rng) {
    auto c = chunks_of(s);
    if (c.size() < 6) return false;
    for (int attempt = 0; attempt < 8; ++attempt) {
        size_t j = 2 + rng.index(c.size() - 4);
        if (bare_word(c[j]) && bare_word(c[j + 1])) {
            c[j] = "\"" + c[j];
            c[j + 1] += "\"";
            s = join_chunks(c);
            return true;
        }
    }
    return false;
}

bool TextBuilder::add_slip(std::string& s, Rng& rng) {
    auto c = chunks_of(s);
    if (c.size() < 6) return false;
    for (int attempt = 0; attempt < 8; ++attempt) {
        size_t j = 2 + rng.index(c.size() - 4);
        if (!bare_word(c[j]) || !bare_word(c[j + 1])) continue;
        if (rng.index(2) == 0) {
            if (c[j + 2] == c[j] || c[j - 1] == c[j]) continue; // keep it one slip
            c[j + 1] = c[j]; // doubled word
        } else {
            std::string filler = kVowelNouns[rng.index(kVowelNouns.size())];
            if (c[j + 2] == filler || c[j - 1] == "a") continue;
            c[j] = "a";
            c[j + 1] = filler;
        }
        s = join_chunks(c);
        return true;
    }
    return false;
}

// ---------------------------------------------------------------------------
// Per-cell generation.

struct CellSpec {
    corpus::Klass klass;
    corpus::Variant variant;
    CellTarget target;
};

std::string slug(const std::string& title) {
    std::string out;
    for (char ch : title) {
        if (ch == ' ')
            out += '-';
        else if (ch >= 'A' && ch <= 'Z')
            out += static_cast<char>(ch - 'A' + 'a');
        else
            out += ch;
    }
    return out;
}

void generate_cell(std::vector<corpus::TextSample>& out, corpus::Category cat,
                   const CellSpec& cell, uint64_t seed) {
    const Style& style = style_for(cell.klass, cell.variant);
    const auto& topic_pool = kCategoryNouns[static_cast<size_t>(cat)];
    std::string cell_name = std::string(corpus::to_string(cat)) + "/" +
                            corpus::to_string(cell.klass) + "/" +
                            corpus::to_string(cell.variant);
    Rng cell_rng(substream_seed(seed, cell_name));
    auto paragraphs = split_total(cell.target.paragraphs, 10, cell_rng);
    auto sentences = split_total(cell.target.sentences, 10, cell_rng);
    auto words = split_total(cell.target.words, 10, cell_rng);

    for (int topic = 0; topic < 10; ++topic) {
        size_t adj_idx = (static_cast<size_t>(cat) * 3 + static_cast<size_t>(topic)) %
                         kTitleAdjectives.size();
        std::string title = capitalized(kTitleAdjectives[adj_idx]) + " " +
                            capitalized(topic_pool[static_cast<size_t>(topic)]);

        corpus::TextSample s;
        s.category = cat;
        s.klass = cell.klass;
        s.variant = cell.variant;
        s.topic_title = title;
        s.id = std::string(corpus::to_string(cell.klass)) + "/" +
               corpus::to_string(cell.variant) + "/" + corpus::to_string(cat) + "/" +
               slug(title);

        Rng rng(substream_seed(seed, s.id));
        TextBuilder builder(rng, style, topic_pool);

        int n_par = std::max(1, paragraphs[static_cast<size_t>(topic)]);
        int n_sent = std::max(n_par, sentences[static_cast<size_t>(topic)]);
        auto sent_per_par = split_total(n_sent, n_par, rng);
        auto lens = split_total(words[static_cast<size_t>(topic)], n_sent, rng);
        jitter_lengths(lens, rng);

        bool blanks = rng.uniform() < style.blank_texts;
        std::vector<std::string> pars;
        size_t cursor = 0;
        for (int p = 0; p < n_par; ++p) {
            int count = std::max(1, sent_per_par[static_cast<size_t>(p)]);
            std::vector<int> par_lens(lens.begin() + static_cast<long>(cursor),
                                      lens.begin() + static_cast<long>(cursor + count));
            cursor += static_cast<size_t>(count);
            pars.push_back(builder.paragraph(par_lens, blanks && p == 0));
        }

        if (rng.uniform() < style.quote_texts) {
            int quotes = 1 + (style.max_quotes > 1 && rng.uniform() < 0.4 ? 1 : 0);
            for (int q = 0; q < quotes; ++q)
                TextBuilder::add_quote(pars[rng.index(pars.size())], rng);
        }
        if (style.max_slips > 0 && rng.uniform() < style.slip_texts) {
            int slips = 1 + static_cast<int>(rng.index(static_cast<size_t>(style.max_slips)));
            for (int e = 0; e < slips; ++e)
                TextBuilder::add_slip(pars[rng.index(pars.size())], rng);
        }

        std::string body;
        for (size_t p = 0; p < pars.size(); ++p) {
            if (p > 0) body += "\n\n";
            body += pars[p];
        }
        s.body = body;
        out.push_back(std::move(s));
    }
}

} // namespace

std::vector<corpus::TextSample> sample_corpus(uint64_t seed) {
    std::vector<corpus::TextSample> out;
    out.reserve(500);
    for (int c = 0; c < corpus::kCategoryCount; ++c) {
        auto cat = static_cast<corpus::Category>(c);
        const CategoryTargets& t = kTargets[static_cast<size_t>(c)];
        const CellSpec cells[5] = {
            {corpus::Klass::human, corpus::Variant::none, t.human},
            {corpus::Klass::ai_generated, corpus::Variant::basic, t.gen_basic},
            {corpus::Klass::ai_rephrased, corpus::Variant::basic, t.reph_basic},
            {corpus::Klass::ai_generated, corpus::Variant::advanced, t.gen_advanced},
            {corpus::Klass::ai_rephrased, corpus::Variant::advanced, t.reph_advanced},
        };
        for (const auto& cell : cells) generate_cell(out, cat, cell, seed);
    }
    return out;
}

std::string chat_answer(const corpus::TextSample& sample) {
    Rng rng(substream_seed(1337, sample.id));
    double u = rng.uniform();
    if (sample.klass == corpus::Klass::human) {
        return u < 0.90 ? "No, I did not write this text."
                        : "It is hard to say whether this text is mine.";
    }
    if (u < 0.70) return "Yes, this text matches my typical output.";
    if (u < 0.90) return "No, I did not write this text.";
    return "It is possible, but I cannot be certain.";
}

void write_chat_cache(const std::vector<corpus::TextSample>& samples, const std::string& path) {
    clients::ResponseCache cache(path);
    for (const auto& s : samples) {
        nlohmann::ordered_json canonical;
        canonical["kind"] = "chat";
        canonical["prompt"] = clients::ChatClient::prompt_for(s.body);
        std::string key = clients::ResponseCache::key_for(clients::ProviderKind::chat,
                                                          canonical.dump());
        if (cache.get(key)) continue;
        nlohmann::json reply;
        reply["response"] = chat_answer(s);
        cache.put(key, reply.dump(), "canned-1");
    }
}

} // namespace stylo::testgen
