// Command-line front end: corpus inspection, featurization, training,
// evaluation, ablation, prediction, and histogram export.
//
// Exit codes: 0 success, 1 usage error (bad flags, unknown names, missing
// inputs), 2 runtime/provider error.
#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "stylodetect/clients.hpp"
#include "stylodetect/corpus.hpp"
#include "stylodetect/eval.hpp"
#include "stylodetect/features.hpp"
#include "stylodetect/lexicon.hpp"
#include "stylodetect/ml.hpp"
#include "stylodetect/ngram_lm.hpp"
#include "stylodetect/parallel.hpp"
#include "stylodetect/rand.hpp"
#include "stylodetect/sha256.hpp"
#include "stylodetect/vectorize.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace stylo;

namespace {

// Raised for operator mistakes (exit 1); everything else exits 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void spit(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

std::string format_double(double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, end);
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        out += c;
        if (c == '"') out += '"';
    }
    return out + "\"";
}

// ---------------------------------------------------------------------------
// Provider wiring

struct ProviderOptions {
    std::string grammar_mode = "fallback";
    std::string grammar_url, grammar_cache;
    std::string chat_mode = "fallback"; // cache-or-error unless switched to live
    std::string chat_url, chat_cache;
    std::string embed_mode = "fallback";
    std::string embed_url, embed_cache;
    size_t embed_dim = 256;
    std::string lm_mode = "fallback";
    std::string lm_url, lm_cache;
    bool impute_ai_feedback = false;
    bool cached_only = false;
    size_t tfidf_terms = 500;
    size_t lm_min_tokens = 1000;
};

void add_provider_flags(CLI::App* sub, ProviderOptions& po) {
    sub->add_option("--grammar-mode", po.grammar_mode,
                    "fallback (built-in rules), live, or cached_only");
    sub->add_option("--grammar-url", po.grammar_url,
                    "LanguageTool-compatible endpoint (or STYLO_GRAMMAR_URL)");
    sub->add_option("--grammar-cache", po.grammar_cache, "response cache path for grammar");
    sub->add_option("--chat-mode", po.chat_mode,
                    "live, cached_only, or fallback (serve cache, else fail)");
    sub->add_option("--chat-url", po.chat_url, "chat endpoint (or STYLO_CHAT_URL)");
    sub->add_option("--chat-cache", po.chat_cache, "response cache path for chat feedback");
    sub->add_option("--embed-mode", po.embed_mode,
                    "fallback (built-in hashed n-grams), live, or cached_only");
    sub->add_option("--embed-url", po.embed_url, "embedding endpoint (or STYLO_EMBED_URL)");
    sub->add_option("--embed-cache", po.embed_cache, "response cache path for embeddings");
    sub->add_option("--embed-dim", po.embed_dim, "built-in embedder dimensions")
        ->default_val(po.embed_dim);
    sub->add_option("--lm-mode", po.lm_mode,
                    "fallback (built-in n-gram model), live, or cached_only");
    sub->add_option("--lm-url", po.lm_url, "perplexity scorer endpoint");
    sub->add_option("--lm-cache", po.lm_cache, "response cache path for the scorer");
    sub->add_flag("--impute-ai-feedback", po.impute_ai_feedback,
                  "score AIFeedback as neutral when no chat provider answers");
    sub->add_flag("--cached-only", po.cached_only,
                  "never touch the network: remote providers serve caches only");
    sub->add_option("--tfidf-terms", po.tfidf_terms, "TF-IDF vocabulary cap")
        ->default_val(po.tfidf_terms);
    sub->add_option("--lm-min-tokens", po.lm_min_tokens,
                    "minimum reference tokens for the built-in model")
        ->default_val(po.lm_min_tokens);
}

// Owns every constructed client/adapter; `shared` points into these members.
struct ProviderSet {
    const text::LexiconSet* lex = nullptr;
    std::unique_ptr<fea::RuleGrammar> rule_grammar;
    std::unique_ptr<clients::GrammarClient> grammar_client;
    std::unique_ptr<fea::GrammarProvider> grammar_adapter;
    std::unique_ptr<clients::ChatClient> chat_client;
    std::unique_ptr<eval::ChatFeedback> chat_adapter;
    std::unique_ptr<vec::HashedEmbedder> hashed_embedder;
    std::unique_ptr<clients::EmbeddingClient> embed_client;
    std::unique_ptr<clients::LmScorerClient> lm_client;
    eval::SharedProviders shared;

    std::string scorer_label() const {
        return shared.fixed_scorer ? shared.fixed_scorer_id : "ngram-lm";
    }
};

struct ClientGrammar final : fea::GrammarProvider {
    explicit ClientGrammar(clients::GrammarClient& c) : client(&c) {}
    int error_count(const std::string& body) override { return client->check(body).count(); }
    std::string id() const override { return "grammar-remote"; }
    clients::GrammarClient* client;
};

clients::ProviderConfig client_config(clients::ProviderKind kind, const std::string& mode,
                                      const std::string& url, const std::string& cache,
                                      bool cached_only) {
    clients::ProviderConfig cfg;
    cfg.kind = kind;
    try {
        cfg.mode = clients::mode_from_string(mode);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    if (cached_only && cfg.mode == clients::ProviderMode::live)
        cfg.mode = clients::ProviderMode::cached_only;
    cfg.endpoint = url;
    cfg.cache_path = cache;
    try {
        clients::validate_config(cfg);
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string(clients::to_string(kind)) + " provider: " + e.what());
    }
    return cfg;
}

std::unique_ptr<ProviderSet> build_providers(const ProviderOptions& po) {
    auto ps = std::make_unique<ProviderSet>();
    ps->lex = &text::LexiconSet::bundled();
    ps->shared.lexicon = ps->lex;

    if (po.grammar_mode == "fallback" && po.grammar_url.empty()) {
        ps->rule_grammar = std::make_unique<fea::RuleGrammar>(*ps->lex);
        ps->shared.grammar = ps->rule_grammar.get();
    } else {
        auto cfg = client_config(clients::ProviderKind::grammar, po.grammar_mode, po.grammar_url,
                                 po.grammar_cache, po.cached_only);
        ps->grammar_client = std::make_unique<clients::GrammarClient>(cfg);
        ps->grammar_adapter = std::make_unique<ClientGrammar>(*ps->grammar_client);
        ps->shared.grammar = ps->grammar_adapter.get();
    }

    bool chat_configured = !po.chat_url.empty() || !po.chat_cache.empty() ||
                           std::getenv("STYLO_CHAT_URL") != nullptr;
    if (chat_configured) {
        std::string mode = po.cached_only ? "cached_only" : po.chat_mode;
        auto cfg = client_config(clients::ProviderKind::chat, mode, po.chat_url, po.chat_cache,
                                 po.cached_only);
        ps->chat_client = std::make_unique<clients::ChatClient>(cfg);
        ps->chat_adapter = std::make_unique<eval::ChatFeedback>(*ps->chat_client);
        ps->shared.chat = ps->chat_adapter.get();
    }

    if (po.embed_mode == "fallback" && po.embed_url.empty()) {
        ps->hashed_embedder = std::make_unique<vec::HashedEmbedder>(po.embed_dim);
        ps->shared.embedder = ps->hashed_embedder.get();
    } else {
        auto cfg = client_config(clients::ProviderKind::embedding, po.embed_mode, po.embed_url,
                                 po.embed_cache, po.cached_only);
        ps->embed_client = std::make_unique<clients::EmbeddingClient>(cfg);
        ps->shared.embedder = ps->embed_client.get();
    }

    if (!(po.lm_mode == "fallback" && po.lm_url.empty())) {
        auto cfg = client_config(clients::ProviderKind::lm, po.lm_mode, po.lm_url, po.lm_cache,
                                 po.cached_only);
        ps->lm_client = std::make_unique<clients::LmScorerClient>(cfg);
        ps->shared.fixed_scorer = ps->lm_client.get();
    }

    ps->shared.impute_ai_feedback = po.impute_ai_feedback;
    ps->shared.tfidf_terms = po.tfidf_terms;
    ps->shared.lm_options.min_tokens = po.lm_min_tokens;
    return ps;
}

ordered_json provider_json(const ProviderSet& ps) {
    ordered_json out;
    out["scorer"] = ps.scorer_label();
    out["grammar"] = ps.shared.grammar->id();
    out["embedder"] = ps.shared.embedder->id();
    out["chat"] = ps.shared.chat ? ps.shared.chat->id() : "(none)";
    return out;
}

ordered_json options_json(const ProviderOptions& po) {
    return ordered_json{{"grammar_mode", po.grammar_mode},
                        {"chat_mode", po.chat_mode},
                        {"embed_mode", po.embed_mode},
                        {"embed_dim", po.embed_dim},
                        {"lm_mode", po.lm_mode},
                        {"impute_ai_feedback", po.impute_ai_feedback},
                        {"cached_only", po.cached_only},
                        {"tfidf_terms", po.tfidf_terms},
                        {"lm_min_tokens", po.lm_min_tokens}};
}

// Every run leaves a provenance record next to its outputs; identical
// records mean identical outputs.
void write_run_json(const fs::path& out_dir, ordered_json record, const ProviderSet* ps) {
    if (ps) {
        record["providers"] = provider_json(*ps);
        ordered_json lex;
        for (const auto& [file, hash] : ps->lex->content_hashes) lex[file] = hash;
        record["lexicon_hashes"] = lex;
    }
    spit(out_dir / "run.json", record.dump(2) + "\n");
}

std::vector<corpus::TextSample> load_corpus_checked(const std::string& path) {
    if (!fs::exists(path)) throw UsageError("corpus not found: " + path);
    return corpus::load_corpus(path);
}

fs::path ensure_out_dir(const std::string& out) {
    fs::path dir(out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw UsageError("cannot create output directory " + out + ": " + ec.message());
    return dir;
}

corpus::TaskName parse_task(const std::string& s) {
    try {
        return corpus::task_from_string(s);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

eval::ClassifierKind parse_classifier(const std::string& s) {
    try {
        return eval::classifier_from_string(s);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

fea::Selection parse_selection(const std::string& s) {
    try {
        return fea::selection_from_name(s);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

// ---------------------------------------------------------------------------
// Subcommand state

struct StatsArgs {
    std::string corpus, out = "out";
};

struct FeaturizeArgs {
    std::string corpus, out = "out";
    std::string selection = "All_traditional+new";
    ProviderOptions providers;
};

struct TrainArgs {
    std::string corpus, out = "out";
    std::string task, classifier;
    std::string selection = "All_traditional+new";
    std::string model_out;
    uint64_t seed = 0;
    ProviderOptions providers;
};

struct EvaluateArgs {
    std::string corpus, out = "out";
    std::string task, classifier;
    std::string selection = "All_traditional+new";
    uint64_t seed = 0;
    ProviderOptions providers;
};

struct AblateArgs {
    std::string corpus, out = "out";
    std::string task;
    uint64_t seed = 0;
    ProviderOptions providers;
};

struct PredictArgs {
    std::string input, model, out = "out";
    std::string title;
    ProviderOptions providers;
};

struct HistArgs {
    std::string corpus, out = "out";
    std::string feature;
    size_t bins = 20;
    ProviderOptions providers;
};

// ---------------------------------------------------------------------------
// stats

int run_stats(const StatsArgs& a) {
    auto samples = load_corpus_checked(a.corpus);
    auto stats = corpus::corpus_stats(samples);
    std::string csv = corpus::stats_csv(stats);
    auto out_dir = ensure_out_dir(a.out);
    spit(out_dir / "corpus_stats.csv", csv);
    write_run_json(out_dir,
                   ordered_json{{"command", "stats"},
                                {"corpus", a.corpus},
                                {"corpus_sha256", sha256_hex(slurp(a.corpus))},
                                {"samples", samples.size()}},
                   nullptr);
    std::fputs(csv.c_str(), stdout);
    return 0;
}

// ---------------------------------------------------------------------------
// featurize

int run_featurize(const FeaturizeArgs& a) {
    auto sel = parse_selection(a.selection);
    auto samples = load_corpus_checked(a.corpus);
    auto ps = build_providers(a.providers);
    auto models = eval::fit_corpus_models(samples, ps->shared);
    auto X = eval::corpus_features(samples, a.selection, ps->shared, models);
    auto columns = fea::subset(models.schema, sel).column_names();

    std::string csv = "id,class";
    for (const auto& c : columns) csv += "," + c;
    csv += "\n";
    for (size_t i = 0; i < samples.size(); ++i) {
        csv += csv_field(samples[i].id);
        csv += ",";
        csv += corpus::to_string(samples[i].klass);
        for (double v : X[i]) csv += "," + format_double(v);
        csv += "\n";
    }

    auto out_dir = ensure_out_dir(a.out);
    spit(out_dir / "features.csv", csv);
    spit(out_dir / "schema.json", fea::schema_json(models.schema));
    write_run_json(out_dir,
                   ordered_json{{"command", "featurize"},
                                {"corpus", a.corpus},
                                {"corpus_sha256", sha256_hex(slurp(a.corpus))},
                                {"selection", a.selection},
                                {"options", options_json(a.providers)}},
                   ps.get());
    std::printf("wrote %zu rows x %zu features to %s\n", X.size(), columns.size(),
                (out_dir / "features.csv").string().c_str());
    return 0;
}

// ---------------------------------------------------------------------------
// train

int run_train(const TrainArgs& a) {
    auto task_name = parse_task(a.task);
    auto clf = parse_classifier(a.classifier);
    parse_selection(a.selection);
    auto samples = load_corpus_checked(a.corpus);
    auto ps = build_providers(a.providers);

    auto task = corpus::build_task(samples, task_name);
    auto pack = eval::featurize_task(task, a.seed, ps->shared, a.selection);
    const auto& fd = pack.folds[0];

    // Mirrors the evaluation cell for fold 0, so `train` + `evaluate` agree.
    uint64_t cell_seed =
        substream_seed(pack.plan.seed, a.selection + "|" + eval::to_string(clf), 0);
    ml::TuneSelection chosen;
    std::string model_json;
    switch (clf) {
    case eval::ClassifierKind::gbt: {
        auto m = ml::tune_boosted(fd.train_X, fd.train_y, fd.val_X, fd.val_y,
                                  ml::default_boosted_grid(), &chosen);
        model_json = ml::save_model(m);
        break;
    }
    case eval::ClassifierKind::rf: {
        auto m = ml::tune_forest(fd.train_X, fd.train_y, fd.val_X, fd.val_y,
                                 ml::default_forest_grid(), cell_seed, &chosen);
        model_json = ml::save_model(m);
        break;
    }
    case eval::ClassifierKind::mlp: {
        auto m = ml::tune_mlp(fd.train_X, fd.train_y, fd.val_X, fd.val_y, ml::default_mlp_grid(),
                              cell_seed, &chosen);
        model_json = ml::save_model(m);
        break;
    }
    }

    auto model = ml::load_model(model_json);
    std::vector<int> preds;
    preds.reserve(fd.test_X.size());
    for (const auto& row : fd.test_X) preds.push_back(model.predict(row));
    auto metrics = eval::compute_metrics(preds, fd.test_y);

    ordered_json bundle;
    bundle["format"] = "stylo-bundle";
    bundle["version"] = 1;
    bundle["task"] = pack.task;
    bundle["selection"] = a.selection;
    bundle["classifier"] = eval::to_string(clf);
    bundle["seed"] = a.seed;
    bundle["columns"] = fd.columns;
    bundle["embedder_id"] = ps->shared.embedder->id();
    bundle["embed_dim"] = ps->shared.embedder->dim();
    bundle["scorer_id"] = ps->scorer_label();
    bundle["model"] = model_json;
    bundle["tfidf"] = fd.tfidf.to_json();
    bundle["lm"] = fd.lm ? ordered_json(fd.lm->to_json()) : ordered_json(nullptr);
    bundle["train_X"] = fd.train_X;
    bundle["train_y"] = fd.train_y;
    bundle["train_ids"] = fd.train_ids;
    bundle["metrics"] =
        ordered_json{{"test_acc", metrics.acc}, {"test_f1", metrics.f1},
                     {"hyperparams", chosen.params_desc}};
    ordered_json prov{{"schema_hash", pack.provenance.schema_hash},
                      {"seed", pack.provenance.seed}};
    for (const auto& [role, id] : pack.provenance.providers) prov["providers"][role] = id;
    bundle["provenance"] = prov;

    auto out_dir = ensure_out_dir(a.out);
    fs::path model_path =
        a.model_out.empty() ? out_dir / ("model_" + pack.task + "_" + a.classifier + ".json")
                            : fs::path(a.model_out);
    if (model_path.has_parent_path()) fs::create_directories(model_path.parent_path());
    spit(model_path, bundle.dump() + "\n");

    write_run_json(out_dir,
                   ordered_json{{"command", "train"},
                                {"corpus", a.corpus},
                                {"corpus_sha256", sha256_hex(slurp(a.corpus))},
                                {"task", a.task},
                                {"classifier", eval::to_string(clf)},
                                {"selection", a.selection},
                                {"seed", a.seed},
                                {"model", model_path.string()},
                                {"options", options_json(a.providers)}},
                   ps.get());
    std::printf("%s %s on %s: fold-0 test acc %.3f f1 %.3f (%s)\n", eval::to_string(clf),
                a.selection.c_str(), pack.task.c_str(), metrics.acc, metrics.f1,
                chosen.params_desc.c_str());
    std::printf("model bundle: %s\n", model_path.string().c_str());
    return 0;
}

// ---------------------------------------------------------------------------
// evaluate / ablate

int run_evaluate(const EvaluateArgs& a) {
    auto task_name = parse_task(a.task);
    auto clf = parse_classifier(a.classifier);
    parse_selection(a.selection);
    auto samples = load_corpus_checked(a.corpus);
    auto ps = build_providers(a.providers);

    auto task = corpus::build_task(samples, task_name);
    auto pack = eval::featurize_task(task, a.seed, ps->shared, a.selection);
    auto rep = eval::run_cell(pack, clf, a.selection);

    auto out_dir = ensure_out_dir(a.out);
    spit(out_dir / "report.csv", eval::report_csv({rep}));
    spit(out_dir / "summary.csv", eval::summary_csv({rep}));
    std::string table = eval::format_table({rep});
    spit(out_dir / "table.txt", table);
    write_run_json(out_dir,
                   ordered_json{{"command", "evaluate"},
                                {"corpus", a.corpus},
                                {"corpus_sha256", sha256_hex(slurp(a.corpus))},
                                {"task", a.task},
                                {"classifier", eval::to_string(clf)},
                                {"selection", a.selection},
                                {"seed", a.seed},
                                {"schema_hash", rep.provenance.schema_hash},
                                {"options", options_json(a.providers)}},
                   ps.get());
    std::fputs(table.c_str(), stdout);
    return 0;
}

int run_ablate(const AblateArgs& a) {
    auto task_name = parse_task(a.task);
    auto samples = load_corpus_checked(a.corpus);
    auto ps = build_providers(a.providers);

    auto task = corpus::build_task(samples, task_name);
    auto pack = eval::featurize_task(task, a.seed, ps->shared);
    auto reports = eval::ablation_matrix(pack);

    auto out_dir = ensure_out_dir(a.out);
    spit(out_dir / "report.csv", eval::report_csv(reports));
    spit(out_dir / "summary.csv", eval::summary_csv(reports));
    std::string table = eval::format_table(reports);
    spit(out_dir / "table.txt", table);
    write_run_json(out_dir,
                   ordered_json{{"command", "ablate"},
                                {"corpus", a.corpus},
                                {"corpus_sha256", sha256_hex(slurp(a.corpus))},
                                {"task", a.task},
                                {"seed", a.seed},
                                {"schema_hash", pack.provenance.schema_hash},
                                {"options", options_json(a.providers)}},
                   ps.get());
    std::fputs(table.c_str(), stdout);
    return 0;
}

// ---------------------------------------------------------------------------
// predict

double percentile_of(const std::vector<double>& pool, double v) {
    if (pool.empty()) return std::nan("");
    size_t less = 0, equal = 0;
    for (double p : pool) {
        less += p < v;
        equal += p == v;
    }
    return 100.0 * (static_cast<double>(less) + 0.5 * static_cast<double>(equal)) /
           static_cast<double>(pool.size());
}

double block_norm(const std::vector<double>& row, size_t start, size_t arity) {
    double s = 0;
    for (size_t i = start; i < start + arity; ++i) s += row[i] * row[i];
    return std::sqrt(s);
}

int run_predict(const PredictArgs& a) {
    if (!fs::exists(a.model)) throw UsageError("model bundle not found: " + a.model);
    if (!fs::exists(a.input)) throw UsageError("input file not found: " + a.input);

    ordered_json bundle;
    try {
        bundle = ordered_json::parse(slurp(a.model));
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(a.model + ": not a model bundle: " + e.what());
    }
    if (bundle.value("format", "") != "stylo-bundle" || bundle.value("version", 0) != 1)
        throw UsageError(a.model + ": not a version-1 stylo-bundle file");

    auto model = ml::load_model(bundle.at("model").get<std::string>());
    auto tfidf = vec::TfidfModel::from_json(bundle.at("tfidf").get<std::string>());
    std::optional<lm::NGramModel> bundled_lm;
    if (!bundle.at("lm").is_null())
        bundled_lm = lm::NGramModel::from_json(bundle.at("lm").get<std::string>());
    std::string selection_name = bundle.at("selection").get<std::string>();
    auto sel = parse_selection(selection_name);
    size_t embed_dim = bundle.at("embed_dim").get<size_t>();
    auto columns = bundle.at("columns").get<std::vector<std::string>>();
    auto train_X = bundle.at("train_X").get<ml::Matrix>();
    auto train_y = bundle.at("train_y").get<std::vector<int>>();

    auto ps = build_providers(a.providers);
    if (ps->shared.embedder->dim() > 0 && ps->shared.embedder->dim() != embed_dim)
        throw UsageError("embedder dimension " + std::to_string(ps->shared.embedder->dim()) +
                         " does not match the bundle's " + std::to_string(embed_dim) +
                         " (use --embed-dim " + std::to_string(embed_dim) + ")");

    corpus::TextSample sample;
    sample.id = fs::path(a.input).filename().string();
    sample.body = corpus::normalize_text(slurp(a.input));
    sample.klass = corpus::Klass::human; // placeholder; features ignore the label
    if (!a.title.empty()) {
        sample.topic_title = a.title;
    } else {
        std::string stem = fs::path(a.input).stem().string();
        std::replace(stem.begin(), stem.end(), '-', ' ');
        std::replace(stem.begin(), stem.end(), '_', ' ');
        sample.topic_title = stem;
    }

    auto schema = fea::FeatureSchema::standard(embed_dim, tfidf.dim());
    auto wanted = fea::subset(schema, sel).column_names();
    if (wanted != columns)
        throw std::runtime_error("bundle columns do not match the reconstructed schema; "
                                 "was the bundle edited?");

    fea::FeatureProviders fp;
    fp.lexicon = ps->lex;
    fp.grammar = ps->shared.grammar;
    fp.chat = ps->shared.chat;
    fp.embedder = ps->shared.embedder;
    fp.tfidf = &tfidf;
    fp.impute_ai_feedback = ps->shared.impute_ai_feedback;
    if (ps->shared.fixed_scorer) {
        fp.scorer = ps->shared.fixed_scorer;
        fp.scorer_id = ps->shared.fixed_scorer_id;
    } else if (bundled_lm) {
        fp.scorer = &*bundled_lm;
        fp.scorer_id = "ngram-lm";
    } else if (sel.categories.count(fea::Category::perplexity) > 0) {
        throw UsageError("the bundle has no built-in language model and no --lm-url was "
                         "given, but the selection needs perplexity features");
    }

    auto fv = fea::assemble(sample, fp, schema, sel);
    if (fv.values.size() != model.n_features())
        throw std::runtime_error("feature count " + std::to_string(fv.values.size()) +
                                 " does not match the model's " +
                                 std::to_string(model.n_features()));

    double proba = model.predict_proba(fv.values);
    int verdict = model.predict(fv.values);

    std::printf("%s: %s (p(ai) = %.3f, model %s %s on %s)\n", a.input.c_str(),
                verdict == 1 ? "AI" : "human", proba,
                bundle.at("classifier").get<std::string>().c_str(), selection_name.c_str(),
                bundle.at("task").get<std::string>().c_str());
    std::printf("\n%-36s %14s %15s %12s\n", "feature", "value", "pctl vs human", "pctl vs AI");

    ml::Matrix human_rows, ai_rows;
    for (size_t i = 0; i < train_X.size(); ++i)
        (train_y[i] == 0 ? human_rows : ai_rows).push_back(train_X[i]);

    auto sub_schema = fea::subset(schema, sel);
    size_t col = 0;
    ordered_json feature_report = ordered_json::array();
    for (const auto& d : sub_schema.descriptors()) {
        std::string label = d.name;
        double value;
        std::vector<double> human_pool, ai_pool;
        if (d.arity == 1) {
            value = fv.values[col];
            for (const auto& r : human_rows) human_pool.push_back(r[col]);
            for (const auto& r : ai_rows) ai_pool.push_back(r[col]);
        } else {
            label += " (L2 of " + std::to_string(d.arity) + " cols)";
            value = block_norm(fv.values, col, d.arity);
            for (const auto& r : human_rows) human_pool.push_back(block_norm(r, col, d.arity));
            for (const auto& r : ai_rows) ai_pool.push_back(block_norm(r, col, d.arity));
        }
        double ph = percentile_of(human_pool, value);
        double pa = percentile_of(ai_pool, value);
        std::printf("%-36s %14.4f %15.1f %12.1f\n", label.c_str(), value, ph, pa);
        feature_report.push_back(ordered_json{
            {"feature", label}, {"value", value}, {"pctl_human", ph}, {"pctl_ai", pa}});
        col += d.arity;
    }

    auto out_dir = ensure_out_dir(a.out);
    write_run_json(out_dir,
                   ordered_json{{"command", "predict"},
                                {"input", a.input},
                                {"input_sha256", sha256_hex(sample.body)},
                                {"model", a.model},
                                {"model_sha256", sha256_hex(slurp(a.model))},
                                {"verdict", verdict == 1 ? "AI" : "human"},
                                {"p_ai", proba},
                                {"features", feature_report},
                                {"options", options_json(a.providers)}},
                   ps.get());
    return 0;
}

// ---------------------------------------------------------------------------
// hist

int run_hist(const HistArgs& a) {
    auto samples = load_corpus_checked(a.corpus);
    auto ps = build_providers(a.providers);
    auto models = eval::fit_corpus_models(samples, ps->shared);
    eval::Histogram h;
    try {
        h = eval::histogram(samples, a.feature, a.bins, ps->shared, models);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    std::string csv = eval::histogram_csv(h);
    auto out_dir = ensure_out_dir(a.out);
    spit(out_dir / ("hist_" + a.feature + ".csv"), csv);
    write_run_json(out_dir,
                   ordered_json{{"command", "hist"},
                                {"corpus", a.corpus},
                                {"corpus_sha256", sha256_hex(slurp(a.corpus))},
                                {"feature", a.feature},
                                {"bins", a.bins},
                                {"options", options_json(a.providers)}},
                   ps.get());
    std::fputs(csv.c_str(), stdout);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"stylodetect: human- vs AI-text detection pipeline\n"
                 "Remote endpoints honor STYLO_GRAMMAR_URL, STYLO_CHAT_URL, STYLO_EMBED_URL,\n"
                 "and STYLO_API_KEY when the matching flag is not given."};
    app.require_subcommand(1);
    app.set_config("--config", "", "read defaults from an INI/TOML file (flags win)");

    int jobs = 0;
    app.add_option("--jobs", jobs, "worker threads (0 = all cores); results do not depend on it")
        ->default_val(0);

    StatsArgs stats;
    auto* sub_stats = app.add_subcommand("stats", "per-cell paragraph/sentence/word counts");
    sub_stats->add_option("corpus", stats.corpus, "corpus JSONL file or directory")->required();
    sub_stats->add_option("--out", stats.out, "output directory")->default_val(stats.out);

    FeaturizeArgs feat;
    auto* sub_feat = app.add_subcommand("featurize", "write the per-sample feature matrix");
    sub_feat->add_option("corpus", feat.corpus, "corpus JSONL file or directory")->required();
    sub_feat->add_option("--out", feat.out, "output directory")->default_val(feat.out);
    sub_feat->add_option("--selection", feat.selection, "feature selection preset")
        ->default_val(feat.selection);
    add_provider_flags(sub_feat, feat.providers);

    TrainArgs train;
    auto* sub_train = app.add_subcommand("train", "train one classifier and save a bundle");
    sub_train->add_option("corpus", train.corpus, "corpus JSONL file or directory")->required();
    sub_train->add_option("--task", train.task, "basic_generation, basic_rephrase, "
                                                "advanced_generation, or advanced_rephrase")
        ->required();
    sub_train->add_option("--classifier", train.classifier, "gbt, rf, or mlp")->required();
    sub_train->add_option("--selection", train.selection, "feature selection preset")
        ->default_val(train.selection);
    sub_train->add_option("--seed", train.seed, "split/tuning seed")->required();
    sub_train->add_option("--out", train.out, "output directory")->default_val(train.out);
    sub_train->add_option("--model-out", train.model_out,
                          "bundle path (default <out>/model_<task>_<classifier>.json)");
    add_provider_flags(sub_train, train.providers);

    EvaluateArgs ev;
    auto* sub_eval = app.add_subcommand("evaluate", "5-fold evaluation of one cell");
    sub_eval->add_option("corpus", ev.corpus, "corpus JSONL file or directory")->required();
    sub_eval->add_option("--task", ev.task, "detection task")->required();
    sub_eval->add_option("--classifier", ev.classifier, "gbt, rf, or mlp")->required();
    sub_eval->add_option("--selection", ev.selection, "feature selection preset")
        ->default_val(ev.selection);
    sub_eval->add_option("--seed", ev.seed, "split/tuning seed")->required();
    sub_eval->add_option("--out", ev.out, "output directory")->default_val(ev.out);
    add_provider_flags(sub_eval, ev.providers);

    AblateArgs ab;
    auto* sub_ablate =
        app.add_subcommand("ablate", "all feature selections x all classifiers for one task");
    sub_ablate->add_option("corpus", ab.corpus, "corpus JSONL file or directory")->required();
    sub_ablate->add_option("--task", ab.task, "detection task")->required();
    sub_ablate->add_option("--seed", ab.seed, "split/tuning seed")->required();
    sub_ablate->add_option("--out", ab.out, "output directory")->default_val(ab.out);
    add_provider_flags(sub_ablate, ab.providers);

    PredictArgs pred;
    auto* sub_pred = app.add_subcommand("predict", "classify one text file with a saved bundle");
    sub_pred->add_option("input", pred.input, "plain-text file to classify")->required();
    sub_pred->add_option("--model", pred.model, "model bundle from `train`")->required();
    sub_pred->add_option("--title", pred.title, "topic title (default: derived from filename)");
    sub_pred->add_option("--out", pred.out, "output directory")->default_val(pred.out);
    add_provider_flags(sub_pred, pred.providers);

    HistArgs hist;
    auto* sub_hist = app.add_subcommand("hist", "per-class histogram of one feature");
    sub_hist->add_option("corpus", hist.corpus, "corpus JSONL file or directory")->required();
    sub_hist->add_option("--feature", hist.feature, "feature name, e.g. PPL_mean or tfidf_0")
        ->required();
    sub_hist->add_option("--bins", hist.bins, "histogram bins")->default_val(hist.bins);
    sub_hist->add_option("--out", hist.out, "output directory")->default_val(hist.out);
    add_provider_flags(sub_hist, hist.providers);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    parallel::set_jobs(jobs);
    try {
        if (*sub_stats) return run_stats(stats);
        if (*sub_feat) return run_featurize(feat);
        if (*sub_train) return run_train(train);
        if (*sub_eval) return run_evaluate(ev);
        if (*sub_ablate) return run_ablate(ab);
        if (*sub_pred) return run_predict(pred);
        if (*sub_hist) return run_hist(hist);
    } catch (const UsageError& e) {
        std::fprintf(stderr, "%s: %s\n", argv[0], e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "%s: %s\n", argv[0], e.what());
        return 2;
    }
    return 1; // unreachable: require_subcommand guarantees a match
}
