#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "stylodetect/eval.hpp"
#include "stylodetect/metrics.hpp"
#include "stylodetect/parallel.hpp"
#include "stylodetect/rand.hpp"
#include "stylodetect/sha256.hpp"
#include "stylodetect/util.hpp"

namespace stylo::eval {

namespace {

std::string format_value(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

// for_each_index with exception transport: the first failure wins and is
// rethrown on the calling thread after the loop drains.
template <typename Fn>
void parallel_guarded(size_t n, Fn&& fn) {
    std::exception_ptr err;
    std::mutex mu;
    std::atomic<bool> failed{false};
    parallel::for_each_index(n, [&](size_t i) {
        if (failed.load(std::memory_order_relaxed)) return;
        try {
            fn(i);
        } catch (...) {
            std::lock_guard<std::mutex> lock(mu);
            if (!err) {
                err = std::current_exception();
                failed.store(true, std::memory_order_relaxed);
            }
        }
    });
    if (err) std::rethrow_exception(err);
}

// Stratified 80/10/10 cut of one class: test first, then val, the rest
// trains.  Consumes randomness from `rng` in a fixed order.
void cut_class(std::vector<std::string> ids, Rng& rng, Fold& fold) {
    rng.shuffle(ids);
    size_t n = ids.size();
    size_t n_test = static_cast<size_t>(std::llround(static_cast<double>(n) * 0.1));
    size_t n_val = n_test;
    for (size_t i = 0; i < n; ++i) {
        if (i < n_test)
            fold.test.push_back(ids[i]);
        else if (i < n_test + n_val)
            fold.val.push_back(ids[i]);
        else
            fold.train.push_back(ids[i]);
    }
}

std::vector<std::string> ids_of(const std::vector<corpus::TextSample>& samples) {
    std::vector<std::string> ids;
    ids.reserve(samples.size());
    for (const auto& s : samples) ids.push_back(s.id);
    return ids;
}

double mean_of(const std::vector<double>& v) {
    return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

} // namespace

SyntheticDataset two_gaussian_dataset(size_t n, size_t d, double center, uint64_t seed) {
    if (n == 0 || d == 0) throw std::invalid_argument("two_gaussian_dataset: empty shape");
    Rng rng(seed);
    SyntheticDataset out;
    out.X.resize(n, std::vector<double>(d));
    out.y.resize(n);
    for (size_t i = 0; i < n; ++i) {
        int label = i < n / 2 ? 0 : 1;
        double shift = label == 1 ? center : -center;
        for (size_t j = 0; j < d; ++j) out.X[i][j] = rng.gauss() + shift;
        out.y[i] = label;
    }
    return out;
}

SplitPlan make_splits(const corpus::DetectionTask& task, uint64_t seed) {
    if (task.positives.size() < 10 || task.negatives.size() < 10)
        throw std::invalid_argument(std::string("make_splits: task ") +
                                    corpus::to_string(task.name) +
                                    " has a class with fewer than 10 samples");
    SplitPlan plan;
    plan.seed = seed;
    plan.folds.resize(5);
    auto pos = ids_of(task.positives);
    auto neg = ids_of(task.negatives);
    for (size_t f = 0; f < plan.folds.size(); ++f) {
        Rng rng(seed + f);
        cut_class(pos, rng, plan.folds[f]);
        cut_class(neg, rng, plan.folds[f]);
    }
    return plan;
}

Metrics compute_metrics(const std::vector<int>& predictions, const std::vector<int>& labels) {
    if (predictions.empty()) throw std::invalid_argument("compute_metrics: empty input");
    if (predictions.size() != labels.size())
        throw std::invalid_argument("compute_metrics: " + std::to_string(predictions.size()) +
                                    " predictions for " + std::to_string(labels.size()) +
                                    " labels");
    auto c = metrics::confusion(labels, predictions);
    return {metrics::accuracy(c), metrics::f1(c)};
}

const char* to_string(ClassifierKind k) {
    switch (k) {
        case ClassifierKind::gbt: return "GBT";
        case ClassifierKind::rf: return "RF";
        case ClassifierKind::mlp: return "MLP";
    }
    return "?";
}

ClassifierKind classifier_from_string(const std::string& s) {
    std::string folded = casefold(s);
    if (folded == "gbt") return ClassifierKind::gbt;
    if (folded == "rf") return ClassifierKind::rf;
    if (folded == "mlp") return ClassifierKind::mlp;
    throw std::invalid_argument("unknown classifier \"" + s + "\" (expected gbt, rf, or mlp)");
}

namespace {

void check_shared(const SharedProviders& shared) {
    if (!shared.lexicon) throw std::invalid_argument("providers: lexicon is required");
    if (!shared.grammar) throw std::invalid_argument("providers: grammar provider is required");
    if (!shared.embedder) throw std::invalid_argument("providers: embedder is required");
}

// A remote embedder learns its width on first contact; make sure dim() is
// known before the schema is laid out.
size_t primed_embedding_dim(const vec::SentenceEmbedder& embedder, const std::string& any_body) {
    size_t dim = embedder.dim();
    if (dim == 0) {
        embedder.embed({any_body});
        dim = embedder.dim();
    }
    if (dim == 0) throw std::runtime_error("embedding provider reports zero dimension");
    return dim;
}

struct SampleRef {
    const corpus::TextSample* sample = nullptr;
    int label = 0;
};

using SampleIndex = std::unordered_map<std::string, SampleRef>;

SampleIndex index_task(const corpus::DetectionTask& task) {
    SampleIndex index;
    for (const auto& s : task.positives) index[s.id] = {&s, 1};
    for (const auto& s : task.negatives) index[s.id] = {&s, 0};
    return index;
}

} // namespace

TaskFeaturePack featurize_task(const corpus::DetectionTask& task, uint64_t seed,
                               const SharedProviders& shared, const std::string& selection) {
    check_shared(shared);
    fea::Selection sel = fea::selection_from_name(selection);

    TaskFeaturePack pack;
    pack.task = corpus::to_string(task.name);
    pack.selection = selection;
    pack.plan = make_splits(task, seed);
    pack.folds.resize(pack.plan.folds.size());

    SampleIndex index = index_task(task);
    size_t embed_dim = primed_embedding_dim(*shared.embedder, task.negatives.front().body);

    std::string schema_blob;
    for (size_t f = 0; f < pack.folds.size(); ++f) {
        FoldFeatures& fd = pack.folds[f];
        const Fold& fold = pack.plan.folds[f];

        const lm::SentenceScorer* scorer = shared.fixed_scorer;
        std::string scorer_id = shared.fixed_scorer_id;
        std::vector<std::string> human_train;
        if (!scorer) {
            for (const auto& id : fold.train) {
                const SampleRef& ref = index.at(id);
                if (ref.label == 0) human_train.push_back(ref.sample->body);
            }
            fd.lm.emplace(lm::NGramModel::train(human_train, shared.lm_options));
            scorer = &*fd.lm;
            scorer_id = "ngram-lm";
        }

        std::vector<std::string> train_bodies;
        train_bodies.reserve(fold.train.size());
        for (const auto& id : fold.train) train_bodies.push_back(index.at(id).sample->body);
        fd.tfidf = vec::TfidfModel::fit(train_bodies, shared.tfidf_terms,
                                        pack.task + "/fold" + std::to_string(f));

        fd.schema = fea::FeatureSchema::standard(embed_dim, fd.tfidf.dim());
        fd.columns = fea::subset(fd.schema, sel).column_names();
        schema_blob += fea::schema_json(fd.schema);

        fea::FeatureProviders fp;
        fp.scorer = scorer;
        fp.scorer_id = scorer_id;
        fp.lexicon = shared.lexicon;
        fp.grammar = shared.grammar;
        fp.chat = shared.chat;
        fp.tfidf = &fd.tfidf;
        fp.embedder = shared.embedder;
        fp.impute_ai_feedback = shared.impute_ai_feedback;

        auto featurize_rows = [&](const std::vector<std::string>& ids, ml::Matrix& X,
                                  std::vector<int>& y, std::vector<std::string>& out_ids,
                                  bool holdout_humans) {
            X.resize(ids.size());
            y.resize(ids.size());
            out_ids = ids;
            parallel_guarded(ids.size(), [&](size_t i) {
                const SampleRef& ref = index.at(ids[i]);
                try {
                    // The fold model has memorized the human training texts;
                    // score those rows with a model fitted on the *other*
                    // training humans so train and test PPL agree in meaning.
                    if (holdout_humans && !shared.fixed_scorer && ref.label == 0 &&
                        sel.categories.count(fea::Category::perplexity) > 0 &&
                        human_train.size() >= 2) {
                        std::vector<std::string> others;
                        others.reserve(human_train.size() - 1);
                        bool dropped = false;
                        for (const auto& body : human_train) {
                            if (!dropped && body == ref.sample->body) {
                                dropped = true;
                                continue;
                            }
                            others.push_back(body);
                        }
                        lm::NGramModel loo = lm::NGramModel::train(others, shared.lm_options);
                        fea::FeatureProviders row_fp = fp;
                        row_fp.scorer = &loo;
                        auto fv = fea::assemble(*ref.sample, row_fp, fd.schema, sel);
                        X[i] = std::move(fv.values);
                    } else {
                        auto fv = fea::assemble(*ref.sample, fp, fd.schema, sel);
                        X[i] = std::move(fv.values);
                    }
                } catch (const std::exception& e) {
                    throw std::runtime_error("fold " + std::to_string(f) + ": " + e.what());
                }
                y[i] = ref.label;
            });
        };
        featurize_rows(fold.train, fd.train_X, fd.train_y, fd.train_ids, true);
        featurize_rows(fold.val, fd.val_X, fd.val_y, fd.val_ids, false);
        featurize_rows(fold.test, fd.test_X, fd.test_y, fd.test_ids, false);

        if (f == 0) pack.provenance.providers["scorer"] = scorer_id;
    }

    pack.provenance.seed = seed;
    pack.provenance.schema_hash = sha256_hex(schema_blob);
    pack.provenance.lexicon_hashes = shared.lexicon->content_hashes;
    pack.provenance.providers["grammar"] = shared.grammar->id();
    pack.provenance.providers["embedder"] = shared.embedder->id();
    pack.provenance.providers["chat"] = shared.chat ? shared.chat->id() : "(none)";
    return pack;
}

namespace {

FoldResult fit_and_test(ClassifierKind clf, const ml::Matrix& train_X,
                        const std::vector<int>& train_y, const ml::Matrix& val_X,
                        const std::vector<int>& val_y, const ml::Matrix& test_X,
                        const std::vector<int>& test_y, uint64_t model_seed) {
    ml::TuneSelection chosen;
    std::vector<int> pred(test_X.size());
    switch (clf) {
        case ClassifierKind::gbt: {
            auto m = ml::tune_boosted(train_X, train_y, val_X, val_y, ml::default_boosted_grid(),
                                      &chosen);
            for (size_t i = 0; i < test_X.size(); ++i) pred[i] = m.predict(test_X[i]);
            break;
        }
        case ClassifierKind::rf: {
            auto m = ml::tune_forest(train_X, train_y, val_X, val_y, ml::default_forest_grid(),
                                     model_seed, &chosen);
            for (size_t i = 0; i < test_X.size(); ++i) pred[i] = m.predict(test_X[i]);
            break;
        }
        case ClassifierKind::mlp: {
            auto m = ml::tune_mlp(train_X, train_y, val_X, val_y, ml::default_mlp_grid(),
                                  model_seed, &chosen);
            for (size_t i = 0; i < test_X.size(); ++i) pred[i] = m.predict(test_X[i]);
            break;
        }
    }
    Metrics met = compute_metrics(pred, test_y);
    return {met.acc, met.f1, chosen.params_desc};
}

ml::Matrix slice_columns(const ml::Matrix& X, const std::vector<size_t>& cols) {
    ml::Matrix out(X.size(), std::vector<double>(cols.size()));
    for (size_t i = 0; i < X.size(); ++i)
        for (size_t j = 0; j < cols.size(); ++j) out[i][j] = X[i][cols[j]];
    return out;
}

void finish_report(EvalReport& report) {
    std::vector<double> accs, f1s;
    for (const auto& fr : report.folds) {
        accs.push_back(fr.acc);
        f1s.push_back(fr.f1);
    }
    report.mean_acc = mean_of(accs);
    report.mean_f1 = mean_of(f1s);
}

} // namespace

EvalReport run_cell(const TaskFeaturePack& pack, ClassifierKind clf, const std::string& selection) {
    fea::Selection sel = fea::selection_from_name(selection);
    EvalReport report;
    report.task = pack.task;
    report.classifier = to_string(clf);
    report.selection = selection;
    report.provenance = pack.provenance;

    std::string cell_tag = selection + "|" + to_string(clf);
    for (size_t f = 0; f < pack.folds.size(); ++f) {
        const FoldFeatures& fd = pack.folds[f];
        std::unordered_map<std::string, size_t> position;
        position.reserve(fd.columns.size());
        for (size_t j = 0; j < fd.columns.size(); ++j) position[fd.columns[j]] = j;
        std::vector<size_t> cols;
        for (const auto& name : fea::subset(fd.schema, sel).column_names()) {
            auto it = position.find(name);
            if (it == position.end())
                throw std::invalid_argument("feature pack built for \"" + pack.selection +
                                            "\" lacks column \"" + name + "\" needed by \"" +
                                            selection + "\"");
            cols.push_back(it->second);
        }
        report.folds.push_back(fit_and_test(
            clf, slice_columns(fd.train_X, cols), fd.train_y, slice_columns(fd.val_X, cols),
            fd.val_y, slice_columns(fd.test_X, cols), fd.test_y,
            substream_seed(pack.plan.seed, cell_tag, f)));
    }
    finish_report(report);
    return report;
}

EvalReport run_cell(const corpus::DetectionTask& task, ClassifierKind clf,
                    const std::string& selection, uint64_t seed, const SharedProviders& shared) {
    return run_cell(featurize_task(task, seed, shared, selection), clf, selection);
}

EvalReport run_synthetic_cell(const SyntheticDataset& ds, ClassifierKind clf, uint64_t seed) {
    if (ds.X.size() != ds.y.size() || ds.X.empty())
        throw std::invalid_argument("run_synthetic_cell: malformed dataset");
    std::vector<std::string> pos, neg;
    for (size_t i = 0; i < ds.y.size(); ++i)
        (ds.y[i] == 1 ? pos : neg).push_back(std::to_string(i));
    if (pos.size() < 10 || neg.size() < 10)
        throw std::invalid_argument("run_synthetic_cell: a class has fewer than 10 samples");

    EvalReport report;
    report.task = "synthetic";
    report.classifier = to_string(clf);
    report.selection = "(matrix)";
    report.provenance.seed = seed;

    for (size_t f = 0; f < 5; ++f) {
        Fold fold;
        Rng rng(seed + f);
        cut_class(pos, rng, fold);
        cut_class(neg, rng, fold);
        auto rows = [&](const std::vector<std::string>& ids, ml::Matrix& X, std::vector<int>& y) {
            for (const auto& id : ids) {
                size_t i = static_cast<size_t>(std::stoul(id));
                X.push_back(ds.X[i]);
                y.push_back(ds.y[i]);
            }
        };
        ml::Matrix trX, vaX, teX;
        std::vector<int> trY, vaY, teY;
        rows(fold.train, trX, trY);
        rows(fold.val, vaX, vaY);
        rows(fold.test, teX, teY);
        report.folds.push_back(fit_and_test(clf, trX, trY, vaX, vaY, teX, teY,
                                            substream_seed(seed, "synthetic", f)));
    }
    finish_report(report);
    return report;
}

std::vector<EvalReport> ablation_matrix(const TaskFeaturePack& pack) {
    const auto& selections = fea::selection_preset_names();
    constexpr ClassifierKind kColumns[3] = {ClassifierKind::gbt, ClassifierKind::rf,
                                            ClassifierKind::mlp};
    std::vector<EvalReport> out(selections.size() * 3);
    parallel_guarded(out.size(), [&](size_t i) {
        out[i] = run_cell(pack, kColumns[i % 3], selections[i / 3]);
    });
    return out;
}

std::vector<EvalReport> ablation_matrix(const corpus::DetectionTask& task, uint64_t seed,
                                        const SharedProviders& shared) {
    return ablation_matrix(featurize_task(task, seed, shared));
}

std::string report_csv(const std::vector<EvalReport>& reports) {
    std::string out = "task,selection,classifier,fold,acc,f1\n";
    for (const auto& r : reports)
        for (size_t f = 0; f < r.folds.size(); ++f)
            out += r.task + "," + r.selection + "," + r.classifier + "," + std::to_string(f) +
                   "," + format_value(r.folds[f].acc) + "," + format_value(r.folds[f].f1) + "\n";
    return out;
}

std::string summary_csv(const std::vector<EvalReport>& reports) {
    std::string out = "task,selection,classifier,mean_acc,mean_f1\n";
    for (const auto& r : reports)
        out += r.task + "," + r.selection + "," + r.classifier + "," + format_value(r.mean_acc) +
               "," + format_value(r.mean_f1) + "\n";
    return out;
}

std::string format_table(const std::vector<EvalReport>& reports) {
    if (reports.empty()) return "(no reports)\n";
    // Preserve first-appearance order of tasks and selections.
    std::vector<std::string> tasks, selections;
    for (const auto& r : reports) {
        if (std::find(tasks.begin(), tasks.end(), r.task) == tasks.end()) tasks.push_back(r.task);
        if (std::find(selections.begin(), selections.end(), r.selection) == selections.end())
            selections.push_back(r.selection);
    }
    const char* columns[3] = {"GBT", "RF", "MLP"};
    auto cell_text = [](const EvalReport& r) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.1f/%.1f", r.mean_acc * 100.0, r.mean_f1 * 100.0);
        return std::string(buf);
    };

    std::string out;
    for (const auto& task : tasks) {
        out += "== " + task + " (acc/f1, % over folds) ==\n";
        size_t name_width = std::string("selection").size();
        for (const auto& s : selections) name_width = std::max(name_width, s.size());
        char line[256];
        std::snprintf(line, sizeof(line), "%-*s  %-16s %-16s %-16s\n",
                      static_cast<int>(name_width), "selection", columns[0], columns[1],
                      columns[2]);
        out += line;
        for (const auto& sel : selections) {
            const EvalReport* by_col[3] = {nullptr, nullptr, nullptr};
            for (const auto& r : reports) {
                if (r.task != task || r.selection != sel) continue;
                for (int c = 0; c < 3; ++c)
                    if (r.classifier == columns[c]) by_col[c] = &r;
            }
            if (!by_col[0] && !by_col[1] && !by_col[2]) continue;
            int best = -1;
            for (int c = 0; c < 3; ++c)
                if (by_col[c] && (best < 0 || by_col[c]->mean_f1 > by_col[best]->mean_f1 ||
                                  (by_col[c]->mean_f1 == by_col[best]->mean_f1 &&
                                   by_col[c]->mean_acc > by_col[best]->mean_acc)))
                    best = c;
            std::string cells[3];
            for (int c = 0; c < 3; ++c) {
                if (!by_col[c])
                    cells[c] = "-";
                else if (c == best)
                    cells[c] = "*" + cell_text(*by_col[c]) + "*";
                else
                    cells[c] = cell_text(*by_col[c]);
            }
            std::snprintf(line, sizeof(line), "%-*s  %-16s %-16s %-16s\n",
                          static_cast<int>(name_width), sel.c_str(), cells[0].c_str(),
                          cells[1].c_str(), cells[2].c_str());
            out += line;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Corpus-level flows

fea::FeatureProviders CorpusModels::providers(const SharedProviders& shared) const {
    fea::FeatureProviders fp;
    fp.scorer = lm ? static_cast<const lm::SentenceScorer*>(&*lm) : shared.fixed_scorer;
    fp.scorer_id = lm ? "ngram-lm" : shared.fixed_scorer_id;
    fp.lexicon = shared.lexicon;
    fp.grammar = shared.grammar;
    fp.chat = shared.chat;
    fp.tfidf = &tfidf;
    fp.embedder = shared.embedder;
    fp.impute_ai_feedback = shared.impute_ai_feedback;
    return fp;
}

CorpusModels fit_corpus_models(const std::vector<corpus::TextSample>& samples,
                               const SharedProviders& shared) {
    check_shared(shared);
    if (samples.empty()) throw std::invalid_argument("fit_corpus_models: no samples");
    CorpusModels models;
    if (!shared.fixed_scorer) {
        std::vector<std::string> human;
        for (const auto& s : samples)
            if (s.klass == corpus::Klass::human) human.push_back(s.body);
        if (!human.empty()) models.lm.emplace(lm::NGramModel::train(human, shared.lm_options));
    }
    std::vector<std::string> bodies;
    bodies.reserve(samples.size());
    for (const auto& s : samples) bodies.push_back(s.body);
    models.tfidf = vec::TfidfModel::fit(bodies, shared.tfidf_terms, "corpus");
    size_t embed_dim = primed_embedding_dim(*shared.embedder, samples.front().body);
    models.schema = fea::FeatureSchema::standard(embed_dim, models.tfidf.dim());
    return models;
}

namespace {

// Assembles one row per sample under the corpus models; human rows get a
// leave-one-out reference model so no text is scored by a model that has
// seen it.
ml::Matrix corpus_matrix(const std::vector<corpus::TextSample>& samples,
                         const fea::Selection& sel, const SharedProviders& shared,
                         const CorpusModels& models) {
    fea::FeatureProviders fp = models.providers(shared);
    std::vector<std::string> human_bodies;
    for (const auto& s : samples)
        if (s.klass == corpus::Klass::human) human_bodies.push_back(s.body);

    bool scores_ppl = sel.categories.count(fea::Category::perplexity) > 0;
    ml::Matrix X(samples.size());
    parallel_guarded(samples.size(), [&](size_t i) {
        const corpus::TextSample& s = samples[i];
        if (scores_ppl && models.lm && s.klass == corpus::Klass::human &&
            human_bodies.size() >= 2) {
            std::vector<std::string> others;
            others.reserve(human_bodies.size() - 1);
            bool dropped = false;
            for (const auto& body : human_bodies) {
                if (!dropped && body == s.body) {
                    dropped = true;
                    continue;
                }
                others.push_back(body);
            }
            lm::NGramModel loo = lm::NGramModel::train(others, shared.lm_options);
            fea::FeatureProviders row_fp = fp;
            row_fp.scorer = &loo;
            X[i] = fea::assemble(s, row_fp, models.schema, sel).values;
        } else {
            X[i] = fea::assemble(s, fp, models.schema, sel).values;
        }
    });
    return X;
}

// Locates the descriptor owning a (possibly block-expanded) column name.
const fea::FeatureDescriptor* descriptor_for_column(const fea::FeatureSchema& schema,
                                                    const std::string& column) {
    for (const auto& d : schema.descriptors()) {
        if (d.arity == 1) {
            if (d.name == column) return &d;
            continue;
        }
        if (column.size() > d.name.size() + 1 && column.compare(0, d.name.size(), d.name) == 0 &&
            column[d.name.size()] == '_') {
            const std::string suffix = column.substr(d.name.size() + 1);
            if (!suffix.empty() && std::all_of(suffix.begin(), suffix.end(), ascii_digit) &&
                std::stoul(suffix) < d.arity)
                return &d;
        }
    }
    return nullptr;
}

size_t klass_slot(corpus::Klass k) {
    switch (k) {
        case corpus::Klass::human: return 0;
        case corpus::Klass::ai_generated: return 1;
        case corpus::Klass::ai_rephrased: return 2;
    }
    return 0;
}

} // namespace

ml::Matrix corpus_features(const std::vector<corpus::TextSample>& samples,
                           const std::string& selection, const SharedProviders& shared,
                           const CorpusModels& models) {
    if (samples.empty()) throw std::invalid_argument("corpus_features: no samples");
    check_shared(shared);
    return corpus_matrix(samples, fea::selection_from_name(selection), shared, models);
}

Histogram histogram(const std::vector<corpus::TextSample>& samples, const std::string& feature,
                    size_t bins, const SharedProviders& shared, const CorpusModels& models) {
    if (samples.empty()) throw std::invalid_argument("histogram: no samples");
    if (bins == 0) throw std::invalid_argument("histogram: bins must be positive");
    const fea::FeatureDescriptor* desc = descriptor_for_column(models.schema, feature);
    if (!desc) throw std::invalid_argument("unknown feature name \"" + feature + "\"");

    fea::Selection sel;
    sel.name = "histogram";
    sel.categories = {desc->category};
    sel.keep_traditional = true;
    sel.keep_novel = true;

    std::vector<std::string> columns = fea::subset(models.schema, sel).column_names();
    auto col_it = std::find(columns.begin(), columns.end(), feature);
    size_t col = static_cast<size_t>(col_it - columns.begin());

    ml::Matrix rows = corpus_matrix(samples, sel, shared, models);
    std::vector<double> values(samples.size());
    for (size_t i = 0; i < samples.size(); ++i) values[i] = rows[i][col];

    double lo = *std::min_element(values.begin(), values.end());
    double hi = *std::max_element(values.begin(), values.end());
    if (!(hi > lo)) hi = lo + 1.0; // degenerate spread: everything lands in bin 0

    Histogram h;
    h.feature = feature;
    h.edges.resize(bins + 1);
    for (size_t b = 0; b <= bins; ++b)
        h.edges[b] = lo + (hi - lo) * static_cast<double>(b) / static_cast<double>(bins);
    for (auto& c : h.counts) c.assign(bins, 0);
    for (auto& fr : h.fractions) fr.assign(bins, 0.0);

    std::array<size_t, 3> class_total{0, 0, 0};
    for (size_t i = 0; i < samples.size(); ++i) {
        size_t slot = klass_slot(samples[i].klass);
        double rel = (values[i] - lo) / (hi - lo);
        size_t b = std::min(bins - 1, static_cast<size_t>(rel * static_cast<double>(bins)));
        ++h.counts[slot][b];
        ++class_total[slot];
    }
    for (size_t k = 0; k < 3; ++k)
        if (class_total[k] > 0)
            for (size_t b = 0; b < bins; ++b)
                h.fractions[k][b] = static_cast<double>(h.counts[k][b]) /
                                    static_cast<double>(class_total[k]);
    return h;
}

std::string histogram_csv(const Histogram& h) {
    static const char* kClasses[3] = {"human", "ai_generated", "ai_rephrased"};
    std::string out = "feature,bin_low,bin_high,class,count,fraction\n";
    size_t bins = h.counts[0].size();
    for (size_t b = 0; b < bins; ++b)
        for (size_t k = 0; k < 3; ++k)
            out += h.feature + "," + format_value(h.edges[b]) + "," + format_value(h.edges[b + 1]) +
                   "," + kClasses[k] + "," + std::to_string(h.counts[k][b]) + "," +
                   format_value(h.fractions[k][b]) + "\n";
    return out;
}

} // namespace stylo::eval
