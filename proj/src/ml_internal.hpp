#pragma once

#include <cmath>
#include <functional>
#include <string>

#include "stylodetect/ml.hpp"

namespace stylo::ml::internal {

// Non-empty, rectangular X; y aligned with labels in {0, 1}.
void check_dataset(const Matrix& X, const std::vector<int>& y, const std::string& what);

// Same contract but an empty set is allowed (validation splits are optional).
void check_optional_set(const Matrix& X, const std::vector<int>& y, size_t width,
                        const std::string& what);

// Returns the sorted candidate feature indices for one split.  Absent
// sampler means "consider every feature".
using FeatureSampler = std::function<std::vector<int>()>;

DecisionTree build_gini_tree(const Matrix& X, const std::vector<int>& y, const TreeParams& params,
                             const FeatureSampler& sample_features);

// Second-order tree on per-sample gradient/hessian pairs; leaves carry
// -G / (H + lambda) and a split must clear `gamma` to be kept.
DecisionTree build_gradient_tree(const Matrix& X, const std::vector<double>& grad,
                                 const std::vector<double>& hess, double lambda, double gamma,
                                 int max_depth, int min_samples_leaf);

inline double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    double e = std::exp(z);
    return e / (1.0 + e);
}

} // namespace stylo::ml::internal
