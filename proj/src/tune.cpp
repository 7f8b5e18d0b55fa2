#include <sstream>
#include <stdexcept>

#include "ml_internal.hpp"
#include "stylodetect/metrics.hpp"

namespace stylo::ml {

std::vector<ForestParams> default_forest_grid() {
    std::vector<ForestParams> grid;
    for (int trees : {100, 300})
        for (int depth : {-1, 10}) {
            ForestParams p;
            p.n_trees = trees;
            p.tree.max_depth = depth;
            grid.push_back(p);
        }
    return grid;
}

std::vector<BoostedParams> default_boosted_grid() {
    std::vector<BoostedParams> grid;
    for (double lr : {0.1, 0.3})
        for (int rounds : {100, 200})
            for (int depth : {3, 6}) {
                BoostedParams p;
                p.learning_rate = lr;
                p.n_rounds = rounds;
                p.max_depth = depth;
                grid.push_back(p);
            }
    return grid;
}

std::vector<MlpParams> default_mlp_grid() {
    std::vector<MlpParams> grid;
    for (int hidden : {32, 64})
        for (double lr : {1e-3, 1e-2}) {
            MlpParams p;
            p.hidden = hidden;
            p.lr = lr;
            grid.push_back(p);
        }
    return grid;
}

std::string describe(const ForestParams& p) {
    std::ostringstream os;
    os << "trees=" << p.n_trees << " max_depth=";
    if (p.tree.max_depth < 0)
        os << "unlimited";
    else
        os << p.tree.max_depth;
    return os.str();
}

std::string describe(const BoostedParams& p) {
    std::ostringstream os;
    os << "rounds=" << p.n_rounds << " lr=" << p.learning_rate << " max_depth=" << p.max_depth;
    return os.str();
}

std::string describe(const MlpParams& p) {
    std::ostringstream os;
    os << "hidden=" << p.hidden << " lr=" << p.lr;
    return os.str();
}

namespace {

struct Score {
    double f1 = -1.0;
    double acc = -1.0;

    bool beats(const Score& other) const {
        return f1 > other.f1 || (f1 == other.f1 && acc > other.acc);
    }
};

template <typename Model>
Score score_on(const Model& model, const Matrix& X, const std::vector<int>& y) {
    std::vector<int> pred(X.size());
    for (size_t i = 0; i < X.size(); ++i) pred[i] = model.predict(X[i]);
    auto c = metrics::confusion(y, pred);
    return {metrics::f1(c), metrics::accuracy(c)};
}

void check_tune_inputs(const Matrix& val_X, size_t grid_size, const char* what) {
    if (grid_size == 0) throw std::invalid_argument(std::string(what) + ": empty grid");
    if (val_X.empty())
        throw std::invalid_argument(std::string(what) + ": tuning requires a validation set");
}

// Exhaustive sweep; the winner has the best validation F1, ties broken by
// validation accuracy, then by grid order.
template <typename Model, typename Params, typename Train>
Model sweep(const std::vector<Params>& grid, const Matrix& val_X, const std::vector<int>& val_y,
            const Train& train_one, TuneSelection* selection) {
    Model best_model;
    Score best_score;
    int best_index = -1;
    for (size_t i = 0; i < grid.size(); ++i) {
        Model m = train_one(grid[i], i);
        Score s = score_on(m, val_X, val_y);
        if (best_index < 0 || s.beats(best_score)) {
            best_model = std::move(m);
            best_score = s;
            best_index = static_cast<int>(i);
        }
    }
    if (selection)
        *selection = {best_index, best_score.f1, best_score.acc,
                      describe(grid[static_cast<size_t>(best_index)])};
    return best_model;
}

} // namespace

ForestModel tune_forest(const Matrix& train_X, const std::vector<int>& train_y, const Matrix& val_X,
                        const std::vector<int>& val_y, const std::vector<ForestParams>& grid,
                        uint64_t seed, TuneSelection* selection) {
    check_tune_inputs(val_X, grid.size(), "tune_forest");
    return sweep<ForestModel>(
        grid, val_X, val_y,
        [&](const ForestParams& p, size_t i) {
            return train_forest(train_X, train_y, p, substream_seed(seed, i));
        },
        selection);
}

BoostedModel tune_boosted(const Matrix& train_X, const std::vector<int>& train_y,
                          const Matrix& val_X, const std::vector<int>& val_y,
                          const std::vector<BoostedParams>& grid, TuneSelection* selection) {
    check_tune_inputs(val_X, grid.size(), "tune_boosted");
    return sweep<BoostedModel>(
        grid, val_X, val_y,
        [&](const BoostedParams& p, size_t) { return train_boosted(train_X, train_y, p); },
        selection);
}

MlpModel tune_mlp(const Matrix& train_X, const std::vector<int>& train_y, const Matrix& val_X,
                  const std::vector<int>& val_y, const std::vector<MlpParams>& grid, uint64_t seed,
                  TuneSelection* selection) {
    check_tune_inputs(val_X, grid.size(), "tune_mlp");
    return sweep<MlpModel>(
        grid, val_X, val_y,
        [&](const MlpParams& p, size_t i) {
            return train_mlp(train_X, train_y, val_X, val_y, p, substream_seed(seed, i));
        },
        selection);
}

} // namespace stylo::ml
