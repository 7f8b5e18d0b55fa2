#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ml_internal.hpp"
#include "stylodetect/parallel.hpp"

namespace stylo::ml {

ForestModel train_forest(const Matrix& X, const std::vector<int>& y, const ForestParams& params,
                         uint64_t seed) {
    internal::check_dataset(X, y, "train_forest");
    if (params.n_trees <= 0) throw std::invalid_argument("train_forest: n_trees must be positive");
    size_t n = X.size();
    size_t d = X[0].size();
    size_t k = params.features_per_split > 0
                   ? static_cast<size_t>(params.features_per_split)
                   : static_cast<size_t>(std::ceil(std::sqrt(static_cast<double>(d))));
    if (k > d) k = d;

    ForestModel model;
    model.n_features = d;
    model.trees.resize(static_cast<size_t>(params.n_trees));
    parallel::for_each_index(model.trees.size(), [&](size_t t) {
        Rng rng(substream_seed(seed, t));
        Matrix bx(n);
        std::vector<int> by(n);
        for (size_t i = 0; i < n; ++i) {
            size_t row = params.bootstrap ? rng.index(n) : i;
            bx[i] = X[row];
            by[i] = y[row];
        }
        internal::FeatureSampler sampler;
        if (k < d)
            sampler = [&rng, d, k]() {
                std::vector<int> all(d);
                std::iota(all.begin(), all.end(), 0);
                rng.shuffle(all);
                all.resize(k);
                std::sort(all.begin(), all.end());
                return all;
            };
        model.trees[t] = internal::build_gini_tree(bx, by, params.tree, sampler);
    });
    return model;
}

double ForestModel::predict_proba(const std::vector<double>& x) const {
    if (trees.empty()) throw std::logic_error("predict on an untrained forest");
    if (x.size() != n_features)
        throw std::invalid_argument("forest predict: expected " + std::to_string(n_features) +
                                    " features, got " + std::to_string(x.size()));
    size_t votes = 0;
    for (const auto& t : trees) votes += t.predict_value(x) > 0.5 ? 1 : 0;
    return static_cast<double>(votes) / static_cast<double>(trees.size());
}

int ForestModel::predict(const std::vector<double>& x) const {
    return predict_proba(x) > 0.5 ? 1 : 0;
}

} // namespace stylo::ml
