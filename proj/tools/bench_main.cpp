// Times the OpenMP kernels against their serial reference paths: forest
// training, task featurization, and the tune/test evaluation cell. The
// worker cap is flipped via stylo::parallel::set_jobs, which is exactly
// what the CLI's --jobs flag drives, so the numbers reflect production
// code paths. Outputs are checked for bit-identity while timing.
#include <chrono>
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "sample_corpus.hpp"
#include "stylodetect/eval.hpp"
#include "stylodetect/features.hpp"
#include "stylodetect/lexicon.hpp"
#include "stylodetect/ml.hpp"
#include "stylodetect/parallel.hpp"
#include "stylodetect/vectorize.hpp"

using namespace stylo;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <typename Fn>
auto timed(int jobs, double& out_sec, Fn&& fn) {
    parallel::set_jobs(jobs);
    auto t0 = std::chrono::steady_clock::now();
    auto result = fn();
    out_sec = seconds_since(t0);
    return result;
}

void report(const char* name, double serial_sec, double parallel_sec, bool identical) {
    std::printf("%-24s serial %8.3fs   parallel %8.3fs   speedup %5.2fx   %s\n", name,
                serial_sec, parallel_sec, parallel_sec > 0 ? serial_sec / parallel_sec : 0.0,
                identical ? "outputs identical" : "OUTPUTS DIFFER");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"serial vs OpenMP benchmark over the pipeline's parallel kernels"};
    int jobs = 0;
    size_t embed_dim = 64;
    app.add_option("--jobs", jobs, "parallel worker count (0 = all cores)")->default_val(0);
    app.add_option("--embed-dim", embed_dim, "embedder width for featurization")
        ->default_val(embed_dim);
    CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
    std::printf("OpenMP enabled, %d workers requested (0 = default)\n\n", jobs);
#else
    std::printf("built without OpenMP: both columns run serially\n\n");
#endif

    bool all_identical = true;

    { // forest training: one tree per worker
        auto ds = eval::two_gaussian_dataset(400, 12, 1.0, 7);
        ml::ForestParams params;
        params.n_trees = 300;
        double ts = 0, tp = 0;
        auto serial = timed(1, ts, [&] { return ml::train_forest(ds.X, ds.y, params, 3); });
        auto parallel_model =
            timed(jobs, tp, [&] { return ml::train_forest(ds.X, ds.y, params, 3); });
        bool same = ml::save_model(serial) == ml::save_model(parallel_model);
        all_identical &= same;
        report("train_forest", ts, tp, same);
    }

    const auto& lex = text::LexiconSet::bundled();
    fea::RuleGrammar grammar(lex);
    vec::HashedEmbedder embedder(embed_dim);
    eval::SharedProviders shared;
    shared.lexicon = &lex;
    shared.grammar = &grammar;
    shared.embedder = &embedder;
    shared.impute_ai_feedback = true;

    auto samples = testgen::sample_corpus();
    auto task = corpus::build_task(samples, corpus::TaskName::basic_generation);

    eval::TaskFeaturePack serial_pack, parallel_pack;
    { // featurization: one document per worker inside each fold
        double ts = 0, tp = 0;
        serial_pack = timed(1, ts, [&] { return eval::featurize_task(task, 7, shared); });
        parallel_pack = timed(jobs, tp, [&] { return eval::featurize_task(task, 7, shared); });
        bool same = serial_pack.provenance.schema_hash == parallel_pack.provenance.schema_hash;
        for (size_t f = 0; f < serial_pack.folds.size(); ++f) {
            same &= serial_pack.folds[f].train_X == parallel_pack.folds[f].train_X;
            same &= serial_pack.folds[f].val_X == parallel_pack.folds[f].val_X;
            same &= serial_pack.folds[f].test_X == parallel_pack.folds[f].test_X;
        }
        all_identical &= same;
        report("featurize_task", ts, tp, same);
    }

    { // one evaluation cell: forest tuning dominated by train_forest
        double ts = 0, tp = 0;
        auto serial_rep = timed(1, ts, [&] {
            return eval::run_cell(serial_pack, eval::ClassifierKind::rf, "All_traditional+new");
        });
        auto parallel_rep = timed(jobs, tp, [&] {
            return eval::run_cell(parallel_pack, eval::ClassifierKind::rf, "All_traditional+new");
        });
        bool same = eval::report_csv({serial_rep}) == eval::report_csv({parallel_rep});
        all_identical &= same;
        report("run_cell (RF, All)", ts, tp, same);
    }

    parallel::set_jobs(0);
    return all_identical ? 0 : 1;
}
