#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ml_internal.hpp"

namespace stylo::ml {

namespace {

double clamped_prob(double p) { return std::clamp(p, 1e-12, 1.0 - 1e-12); }

double mean_log_loss(const std::vector<double>& raw, const std::vector<int>& y) {
    double loss = 0.0;
    for (size_t i = 0; i < raw.size(); ++i) {
        double p = clamped_prob(internal::sigmoid(raw[i]));
        loss -= y[i] == 1 ? std::log(p) : std::log(1.0 - p);
    }
    return loss / static_cast<double>(raw.size());
}

} // namespace

BoostedModel train_boosted(const Matrix& X, const std::vector<int>& y,
                           const BoostedParams& params) {
    internal::check_dataset(X, y, "train_boosted");
    if (params.n_rounds < 0)
        throw std::invalid_argument("train_boosted: n_rounds must be non-negative");
    size_t n = X.size();

    double mean_y = 0.0;
    for (int v : y) mean_y += v;
    mean_y = std::clamp(mean_y / static_cast<double>(n), 1e-6, 1.0 - 1e-6);

    BoostedModel model;
    model.base_score = std::log(mean_y / (1.0 - mean_y));
    model.learning_rate = params.learning_rate;
    model.n_features = X[0].size();
    model.trees.reserve(static_cast<size_t>(params.n_rounds));
    model.train_loss_per_round.reserve(static_cast<size_t>(params.n_rounds));

    std::vector<double> raw(n, model.base_score), grad(n), hess(n);
    for (int round = 0; round < params.n_rounds; ++round) {
        for (size_t i = 0; i < n; ++i) {
            double p = internal::sigmoid(raw[i]);
            grad[i] = p - static_cast<double>(y[i]);
            hess[i] = p * (1.0 - p);
        }
        DecisionTree tree = internal::build_gradient_tree(
            X, grad, hess, params.lambda, params.gamma, params.max_depth, params.min_samples_leaf);
        for (size_t i = 0; i < n; ++i)
            raw[i] += params.learning_rate * tree.predict_value(X[i]);
        model.trees.push_back(std::move(tree));
        model.train_loss_per_round.push_back(mean_log_loss(raw, y));
    }
    return model;
}

double BoostedModel::raw_score(const std::vector<double>& x) const {
    if (x.size() != n_features)
        throw std::invalid_argument("boosted predict: expected " + std::to_string(n_features) +
                                    " features, got " + std::to_string(x.size()));
    double s = base_score;
    for (const auto& t : trees) s += learning_rate * t.predict_value(x);
    return s;
}

double BoostedModel::predict_proba(const std::vector<double>& x) const {
    return internal::sigmoid(raw_score(x));
}

int BoostedModel::predict(const std::vector<double>& x) const {
    return predict_proba(x) > 0.5 ? 1 : 0;
}

} // namespace stylo::ml
