#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stylodetect/clients.hpp"
#include "stylodetect/corpus.hpp"
#include "stylodetect/features.hpp"
#include "stylodetect/ml.hpp"
#include "stylodetect/ngram_lm.hpp"
#include "stylodetect/vectorize.hpp"

namespace stylo::eval {

// ---------------------------------------------------------------------------
// Synthetic oracle data

struct SyntheticDataset {
    ml::Matrix X;
    std::vector<int> y;
};

// Two spherical unit-sigma Gaussian clouds in d dimensions: the first half of
// the samples is class 0 centered at -center, the second half class 1 at
// +center.  Deterministic in the seed; used as a separable oracle dataset so
// classifier checks run without a corpus or any provider.
SyntheticDataset two_gaussian_dataset(size_t n, size_t d, double center, uint64_t seed);

// ---------------------------------------------------------------------------
// Split planning

struct Fold {
    std::vector<std::string> train, val, test; // sample ids
};

struct SplitPlan {
    uint64_t seed = 0;
    std::vector<Fold> folds;
};

// Five independent stratified random 80/10/10 splits with seeds seed+0 ..
// seed+4.  Each class is shuffled and cut separately, so class balance holds
// per set to within rounding.  Requires at least 10 samples per class.
SplitPlan make_splits(const corpus::DetectionTask& task, uint64_t seed);

// ---------------------------------------------------------------------------
// Metrics

struct Metrics {
    double acc = 0.0;
    double f1 = 0.0;
};

// AI is the positive class (label 1); F1 is 0 when precision + recall is 0.
// Throws on empty or mismatched inputs.
Metrics compute_metrics(const std::vector<int>& predictions, const std::vector<int>& labels);

// ---------------------------------------------------------------------------
// Providers shared across folds

// Bridges the HTTP chat client into the feature layer.
class ChatFeedback final : public fea::ChatProvider {
public:
    explicit ChatFeedback(clients::ChatClient& client) : client_(&client) {}
    std::string feedback(const std::string& body) override { return client_->feedback(body); }
    std::string id() const override { return "chat-remote"; }

private:
    clients::ChatClient* client_;
};

// The selection-independent pieces of the pipeline.  Fold-local models (the
// built-in reference LM and the TF-IDF vocabulary) are fitted inside
// featurize_task; everything here is fixed for the whole run.
struct SharedProviders {
    const text::LexiconSet* lexicon = nullptr;
    fea::GrammarProvider* grammar = nullptr;
    fea::ChatProvider* chat = nullptr; // optional: AIFeedback imputes or the cell fails
    const vec::SentenceEmbedder* embedder = nullptr;
    bool impute_ai_feedback = false;
    size_t tfidf_terms = 500;
    lm::TrainOptions lm_options; // settings for the fold-fitted reference model

    // When set, perplexity comes from this externally trained scorer and no
    // fold-local LM is fitted.
    const lm::SentenceScorer* fixed_scorer = nullptr;
    std::string fixed_scorer_id = "lm-remote";
};

// ---------------------------------------------------------------------------
// Per-task feature pack

struct Provenance {
    std::string schema_hash; // digest over every fold's schema JSON
    std::map<std::string, std::string> lexicon_hashes;
    std::map<std::string, std::string> providers; // role -> provider id
    uint64_t seed = 0;
};

struct FoldFeatures {
    fea::FeatureSchema schema;
    std::vector<std::string> columns; // expanded names, matrix column order
    ml::Matrix train_X, val_X, test_X;
    std::vector<int> train_y, val_y, test_y;
    std::vector<std::string> train_ids, val_ids, test_ids;

    // Fold-fitted preprocessing, kept around so leakage checks can inspect
    // the trained vocabulary and counts.
    std::optional<lm::NGramModel> lm;
    vec::TfidfModel tfidf;
};

struct TaskFeaturePack {
    std::string task;
    std::string selection; // the preset whose columns the pack carries
    SplitPlan plan;
    std::vector<FoldFeatures> folds;
    Provenance provenance;
};

// Runs the split plan and featurizes every fold once: the reference LM is
// fitted on the fold's human training texts, TF-IDF on all training texts,
// and the selection's features are assembled for train/val/test.  Human
// training rows are perplexity-scored leave-one-out (a model fitted on the
// other human training texts) so their PPL distribution matches the unseen
// val/test rows instead of reflecting memorized text.  A pack built for
// "All_traditional+new" (the default) serves every narrower selection by
// column subsetting.
TaskFeaturePack featurize_task(const corpus::DetectionTask& task, uint64_t seed,
                               const SharedProviders& shared,
                               const std::string& selection = "All_traditional+new");

// ---------------------------------------------------------------------------
// Cells and the ablation matrix

enum class ClassifierKind { gbt, rf, mlp };
const char* to_string(ClassifierKind k); // "GBT" / "RF" / "MLP"
ClassifierKind classifier_from_string(const std::string& s);

struct FoldResult {
    double acc = 0.0;
    double f1 = 0.0;
    std::string hyperparams; // winning grid point, e.g. "trees=300 max_depth=10"
};

struct EvalReport {
    std::string task;
    std::string classifier;
    std::string selection;
    std::vector<FoldResult> folds;
    double mean_acc = 0.0;
    double mean_f1 = 0.0;
    Provenance provenance;
};

// Per fold: slice the selection's columns, tune on the validation split with
// the default grid, evaluate exactly once on the test split.
EvalReport run_cell(const TaskFeaturePack& pack, ClassifierKind clf,
                    const std::string& selection);
EvalReport run_cell(const corpus::DetectionTask& task, ClassifierKind clf,
                    const std::string& selection, uint64_t seed, const SharedProviders& shared);

// The same tune-on-val / test-once loop over a synthetic matrix task.
EvalReport run_synthetic_cell(const SyntheticDataset& ds, ClassifierKind clf, uint64_t seed);

// Every selection preset crossed with {GBT, RF, MLP}, reports in row-major
// (selection, classifier) order.  Cells run in parallel; the result order
// does not depend on the worker count.
std::vector<EvalReport> ablation_matrix(const TaskFeaturePack& pack);
std::vector<EvalReport> ablation_matrix(const corpus::DetectionTask& task, uint64_t seed,
                                        const SharedProviders& shared);

std::string report_csv(const std::vector<EvalReport>& reports);  // one row per fold
std::string summary_csv(const std::vector<EvalReport>& reports); // one row per cell
std::string format_table(const std::vector<EvalReport>& reports);

// ---------------------------------------------------------------------------
// Corpus-level flows (histograms, prediction explanations)

// Non-fold models: the reference LM is fitted on every human sample and
// TF-IDF on the entire corpus.
struct CorpusModels {
    fea::FeatureSchema schema;
    std::optional<lm::NGramModel> lm;
    vec::TfidfModel tfidf;

    fea::FeatureProviders providers(const SharedProviders& shared) const;
};

CorpusModels fit_corpus_models(const std::vector<corpus::TextSample>& samples,
                               const SharedProviders& shared);

// Feature rows for every sample under the corpus-level models, in sample
// order with subset(models.schema, selection) columns.  Human samples are
// scored against a reference model fitted on the *other* human samples, so
// their perplexities reflect unseen text the same way the AI rows' do.
ml::Matrix corpus_features(const std::vector<corpus::TextSample>& samples,
                           const std::string& selection, const SharedProviders& shared,
                           const CorpusModels& models);

// Class order everywhere: human, ai_generated, ai_rephrased.
struct Histogram {
    std::string feature;
    std::vector<double> edges; // bins + 1 shared edges; last bin closes at the top
    std::array<std::vector<size_t>, 3> counts;
    std::array<std::vector<double>, 3> fractions; // count / class size, 0 for an empty class
};

Histogram histogram(const std::vector<corpus::TextSample>& samples, const std::string& feature,
                    size_t bins, const SharedProviders& shared, const CorpusModels& models);
std::string histogram_csv(const Histogram& h);

} // namespace stylo::eval
