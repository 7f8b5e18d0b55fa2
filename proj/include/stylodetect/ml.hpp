#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stylodetect/rand.hpp"

namespace stylo::ml {

using Matrix = std::vector<std::vector<double>>;

// ---------------------------------------------------------------------------
// Decision trees

// Flat node pool; `feature == -1` marks a leaf.  Internal nodes route
// x[feature] <= threshold to `left`, otherwise to `right`.  For classification
// trees `value` is the fraction of positive training samples in the leaf; for
// boosted regression trees it is the additive leaf score.
struct TreeNode {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;
};

struct TreeParams {
    int max_depth = -1; // -1: unlimited
    int min_samples_leaf = 1;
    int min_samples_split = 2;
};

struct DecisionTree {
    std::vector<TreeNode> nodes; // nodes[0] is the root when non-empty
    size_t n_features = 0;

    double predict_value(const std::vector<double>& x) const;
    int depth() const; // leaf-only tree has depth 0
};

// Greedy CART on the Gini criterion.  Candidate thresholds are midpoints
// between consecutive distinct sorted feature values; the best (feature,
// threshold) pair is chosen by weighted child impurity, ties resolved in
// favor of the first candidate encountered (features in ascending index
// order, thresholds in ascending value order).
DecisionTree train_tree(const Matrix& X, const std::vector<int>& y, const TreeParams& params);

// Exposed for the brute-force oracle in tests: impurity of a label multiset.
double gini_impurity(const std::vector<int>& labels);

// ---------------------------------------------------------------------------
// Random forest

struct ForestParams {
    int n_trees = 100;
    TreeParams tree;            // tree.max_depth applies per member
    bool bootstrap = true;      // n draws with replacement per tree
    int features_per_split = 0; // 0: ceil(sqrt(d))
};

struct ForestModel {
    std::vector<DecisionTree> trees;
    size_t n_features = 0;

    // Fraction of member trees voting class 1 (leaf value > 0.5 counts as a
    // class-1 vote; a leaf exactly at 0.5 votes class 0).
    double predict_proba(const std::vector<double>& x) const;
    int predict(const std::vector<double>& x) const; // proba > 0.5, ties -> 0
};

ForestModel train_forest(const Matrix& X, const std::vector<int>& y, const ForestParams& params,
                         uint64_t seed);

// ---------------------------------------------------------------------------
// Gradient-boosted trees (logistic loss)

struct BoostedParams {
    int n_rounds = 100;
    double learning_rate = 0.1;
    int max_depth = 3;
    double lambda = 1.0; // L2 on leaf weights
    double gamma = 0.0;  // min gain to split
    int min_samples_leaf = 1;
};

struct BoostedModel {
    std::vector<DecisionTree> trees;
    double base_score = 0.0; // log-odds prior
    double learning_rate = 0.1;
    size_t n_features = 0;

    double raw_score(const std::vector<double>& x) const;
    double predict_proba(const std::vector<double>& x) const; // sigmoid(raw)
    int predict(const std::vector<double>& x) const;

    std::vector<double> train_loss_per_round; // mean logistic loss after each round
};

BoostedModel train_boosted(const Matrix& X, const std::vector<int>& y, const BoostedParams& params);

// ---------------------------------------------------------------------------
// Multi-layer perceptron (one ReLU hidden layer, logistic output)

struct Scaler {
    std::vector<double> mean;
    std::vector<double> stdev; // 0 marks a constant feature: passed through unscaled

    static Scaler fit(const Matrix& X);
    std::vector<double> apply(const std::vector<double>& x) const;
    Matrix apply(const Matrix& X) const;
};

struct MlpParams {
    int hidden = 32;
    double lr = 1e-3;
    int batch = 16;
    int max_epochs = 200;
    int patience = 10; // epochs without val-loss improvement before stopping
};

namespace detail {

// Weights for the [d, h, 1] network.  Kept separate from MlpModel so the
// finite-difference test can perturb raw parameters.
struct Net {
    Matrix w1;              // h x d
    std::vector<double> b1; // h
    std::vector<double> w2; // h
    double b2 = 0.0;

    double forward(const std::vector<double>& x) const; // probability
};

struct NetGrad {
    Matrix w1;
    std::vector<double> b1;
    std::vector<double> w2;
    double b2 = 0.0;
};

Net init_net(size_t d, int hidden, Rng& rng);
double batch_loss(const Net& net, const Matrix& X, const std::vector<int>& y);
NetGrad batch_gradient(const Net& net, const Matrix& X, const std::vector<int>& y);

} // namespace detail

struct MlpModel {
    Scaler scaler;
    detail::Net net;
    size_t n_features = 0;
    int epochs_run = 0;
    double best_val_loss = 0.0;

    double predict_proba(const std::vector<double>& x) const;
    int predict(const std::vector<double>& x) const;
};

// Mini-batch Adam on binary cross-entropy.  The scaler is fitted on the
// training split only.  Early stopping tracks validation loss and restores
// the best snapshot; an empty validation set disables it.  A non-finite
// training loss aborts with an error naming the epoch.
MlpModel train_mlp(const Matrix& train_X, const std::vector<int>& train_y, const Matrix& val_X,
                   const std::vector<int>& val_y, const MlpParams& params, uint64_t seed);

// ---------------------------------------------------------------------------
// Grid search

struct TuneSelection {
    int best_index = -1;
    double val_f1 = 0.0;
    double val_acc = 0.0;
    std::string params_desc;
};

// Every grid point is trained; the winner has the best validation F1, ties
// broken by validation accuracy, then by grid order.
std::vector<ForestParams> default_forest_grid();
std::vector<BoostedParams> default_boosted_grid();
std::vector<MlpParams> default_mlp_grid();

std::string describe(const ForestParams& p);
std::string describe(const BoostedParams& p);
std::string describe(const MlpParams& p);

ForestModel tune_forest(const Matrix& train_X, const std::vector<int>& train_y, const Matrix& val_X,
                        const std::vector<int>& val_y, const std::vector<ForestParams>& grid,
                        uint64_t seed, TuneSelection* selection = nullptr);
BoostedModel tune_boosted(const Matrix& train_X, const std::vector<int>& train_y,
                          const Matrix& val_X, const std::vector<int>& val_y,
                          const std::vector<BoostedParams>& grid,
                          TuneSelection* selection = nullptr);
MlpModel tune_mlp(const Matrix& train_X, const std::vector<int>& train_y, const Matrix& val_X,
                  const std::vector<int>& val_y, const std::vector<MlpParams>& grid, uint64_t seed,
                  TuneSelection* selection = nullptr);

// ---------------------------------------------------------------------------
// Serialization

// Versioned JSON with exact double round-trip.  `kind` is one of "forest",
// "boosted", "mlp".
std::string save_model(const ForestModel& m);
std::string save_model(const BoostedModel& m);
std::string save_model(const MlpModel& m);

struct AnyModel {
    std::string kind;
    std::optional<ForestModel> forest;
    std::optional<BoostedModel> boosted;
    std::optional<MlpModel> mlp;

    double predict_proba(const std::vector<double>& x) const;
    int predict(const std::vector<double>& x) const;
    size_t n_features() const;
};

AnyModel load_model(const std::string& json_text);

} // namespace stylo::ml
