#include <algorithm>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <utility>

#include "ml_internal.hpp"

namespace stylo::ml {

double DecisionTree::predict_value(const std::vector<double>& x) const {
    if (nodes.empty()) throw std::logic_error("predict on an untrained tree");
    int i = 0;
    while (nodes[i].feature >= 0)
        i = x[static_cast<size_t>(nodes[i].feature)] <= nodes[i].threshold ? nodes[i].left
                                                                           : nodes[i].right;
    return nodes[i].value;
}

int DecisionTree::depth() const {
    if (nodes.empty()) return 0;
    std::function<int(int)> walk = [&](int i) {
        if (nodes[i].feature < 0) return 0;
        return 1 + std::max(walk(nodes[i].left), walk(nodes[i].right));
    };
    return walk(0);
}

double gini_impurity(const std::vector<int>& labels) {
    if (labels.empty()) return 0.0;
    double pos = 0.0;
    for (int v : labels) pos += v == 1 ? 1.0 : 0.0;
    double p = pos / static_cast<double>(labels.size());
    double q = 1.0 - p;
    return 1.0 - p * p - q * q;
}

namespace internal {

void check_dataset(const Matrix& X, const std::vector<int>& y, const std::string& what) {
    if (X.empty()) throw std::invalid_argument(what + ": training data is empty");
    size_t d = X[0].size();
    if (d == 0) throw std::invalid_argument(what + ": rows have no features");
    for (size_t i = 0; i < X.size(); ++i) {
        if (X[i].size() != d)
            throw std::invalid_argument(what + ": row " + std::to_string(i) + " has " +
                                        std::to_string(X[i].size()) + " values, expected " +
                                        std::to_string(d));
        // NaN breaks the strict weak ordering the split sweep sorts by, so
        // reject non-finite values before they can corrupt anything silently.
        for (double v : X[i])
            if (!std::isfinite(v))
                throw std::invalid_argument(what + ": non-finite feature value in row " +
                                            std::to_string(i));
    }
    if (y.size() != X.size())
        throw std::invalid_argument(what + ": " + std::to_string(X.size()) + " rows but " +
                                    std::to_string(y.size()) + " labels");
    for (int v : y)
        if (v != 0 && v != 1) throw std::invalid_argument(what + ": labels must be 0 or 1");
}

void check_optional_set(const Matrix& X, const std::vector<int>& y, size_t width,
                        const std::string& what) {
    if (X.empty() && y.empty()) return;
    check_dataset(X, y, what);
    if (X[0].size() != width)
        throw std::invalid_argument(what + ": expected " + std::to_string(width) +
                                    " features, got " + std::to_string(X[0].size()));
}

namespace {

// Splits with a smaller gain than this are treated as no improvement; it
// absorbs rounding noise on mathematically zero-gain candidates.
constexpr double kMinGain = 1e-12;

double gini_of(double pos, double n) {
    double p = pos / n;
    double q = 1.0 - p;
    return 1.0 - p * p - q * q;
}

struct Builder {
    enum class Mode { classification, gradient };

    Mode mode;
    const Matrix& X;
    const std::vector<int>* labels = nullptr;
    const std::vector<double>* grad = nullptr;
    const std::vector<double>* hess = nullptr;
    double lambda = 0.0;
    double gamma = 0.0;
    int max_depth = -1;
    size_t min_samples_leaf = 1;
    size_t min_samples_split = 2;
    const FeatureSampler* sampler = nullptr;
    std::vector<TreeNode> nodes;

    double leaf_value(const std::vector<int>& idx) const {
        if (mode == Mode::classification) {
            double pos = 0.0;
            for (int i : idx) pos += (*labels)[static_cast<size_t>(i)] == 1 ? 1.0 : 0.0;
            return pos / static_cast<double>(idx.size());
        }
        double g = 0.0, h = 0.0;
        for (int i : idx) {
            g += (*grad)[static_cast<size_t>(i)];
            h += (*hess)[static_cast<size_t>(i)];
        }
        return -g / (h + lambda);
    }

    bool pure(const std::vector<int>& idx) const {
        if (mode != Mode::classification) return false;
        int first = (*labels)[static_cast<size_t>(idx[0])];
        for (int i : idx)
            if ((*labels)[static_cast<size_t>(i)] != first) return false;
        return true;
    }

    // Best (feature, threshold) by gain; candidates are swept with features in
    // ascending index order and thresholds in ascending value order, and a tie
    // keeps the earlier candidate.
    bool find_split(const std::vector<int>& idx, int& best_feature, double& best_thr) const {
        size_t n = idx.size();
        double parent_pos = 0.0, parent_g = 0.0, parent_h = 0.0;
        for (int i : idx) {
            if (mode == Mode::classification)
                parent_pos += (*labels)[static_cast<size_t>(i)] == 1 ? 1.0 : 0.0;
            else {
                parent_g += (*grad)[static_cast<size_t>(i)];
                parent_h += (*hess)[static_cast<size_t>(i)];
            }
        }
        double parent_impurity =
            mode == Mode::classification ? gini_of(parent_pos, static_cast<double>(n)) : 0.0;

        std::vector<int> features;
        if (sampler && *sampler)
            features = (*sampler)();
        else {
            features.resize(X[0].size());
            std::iota(features.begin(), features.end(), 0);
        }

        double best_gain = kMinGain;
        bool found = false;
        std::vector<int> order(idx);
        for (int f : features) {
            size_t fu = static_cast<size_t>(f);
            std::sort(order.begin(), order.end(),
                      [&](int a, int b) { return X[static_cast<size_t>(a)][fu] < X[static_cast<size_t>(b)][fu]; });
            double left_pos = 0.0, left_g = 0.0, left_h = 0.0;
            for (size_t k = 0; k + 1 < n; ++k) {
                size_t i = static_cast<size_t>(order[k]);
                if (mode == Mode::classification)
                    left_pos += (*labels)[i] == 1 ? 1.0 : 0.0;
                else {
                    left_g += (*grad)[i];
                    left_h += (*hess)[i];
                }
                double v = X[i][fu];
                double vn = X[static_cast<size_t>(order[k + 1])][fu];
                if (!(v < vn)) continue;
                size_t nl = k + 1, nr = n - nl;
                if (nl < min_samples_leaf || nr < min_samples_leaf) continue;
                double gain;
                if (mode == Mode::classification) {
                    double weighted = (static_cast<double>(nl) * gini_of(left_pos, static_cast<double>(nl)) +
                                       static_cast<double>(nr) *
                                           gini_of(parent_pos - left_pos, static_cast<double>(nr))) /
                                      static_cast<double>(n);
                    gain = parent_impurity - weighted;
                } else {
                    double rg = parent_g - left_g, rh = parent_h - left_h;
                    gain = 0.5 * (left_g * left_g / (left_h + lambda) + rg * rg / (rh + lambda) -
                                  parent_g * parent_g / (parent_h + lambda)) -
                           gamma;
                }
                if (gain > best_gain) {
                    best_gain = gain;
                    best_feature = f;
                    // Midpoint, pulled back to the lower value if rounding
                    // would land it on the upper one.
                    double thr = v + (vn - v) / 2.0;
                    best_thr = thr < vn ? thr : v;
                    found = true;
                }
            }
        }
        return found;
    }

    int build(std::vector<int> idx, int depth) {
        int id = static_cast<int>(nodes.size());
        nodes.emplace_back();
        nodes[static_cast<size_t>(id)].value = leaf_value(idx);
        bool can_split = idx.size() >= min_samples_split &&
                         (max_depth < 0 || depth < max_depth) && !pure(idx);
        if (can_split) {
            int f = -1;
            double thr = 0.0;
            if (find_split(idx, f, thr)) {
                std::vector<int> left, right;
                for (int i : idx)
                    (X[static_cast<size_t>(i)][static_cast<size_t>(f)] <= thr ? left : right)
                        .push_back(i);
                nodes[static_cast<size_t>(id)].feature = f;
                nodes[static_cast<size_t>(id)].threshold = thr;
                int l = build(std::move(left), depth + 1);
                nodes[static_cast<size_t>(id)].left = l;
                int r = build(std::move(right), depth + 1);
                nodes[static_cast<size_t>(id)].right = r;
            }
        }
        return id;
    }

    DecisionTree run() {
        std::vector<int> all(X.size());
        std::iota(all.begin(), all.end(), 0);
        build(std::move(all), 0);
        DecisionTree t;
        t.nodes = std::move(nodes);
        t.n_features = X[0].size();
        return t;
    }
};

} // namespace

DecisionTree build_gini_tree(const Matrix& X, const std::vector<int>& y, const TreeParams& params,
                             const FeatureSampler& sample_features) {
    Builder b{Builder::Mode::classification, X};
    b.labels = &y;
    b.max_depth = params.max_depth;
    b.min_samples_leaf = static_cast<size_t>(std::max(1, params.min_samples_leaf));
    b.min_samples_split = static_cast<size_t>(std::max(2, params.min_samples_split));
    b.sampler = &sample_features;
    return b.run();
}

DecisionTree build_gradient_tree(const Matrix& X, const std::vector<double>& grad,
                                 const std::vector<double>& hess, double lambda, double gamma,
                                 int max_depth, int min_samples_leaf) {
    Builder b{Builder::Mode::gradient, X};
    b.grad = &grad;
    b.hess = &hess;
    b.lambda = lambda;
    b.gamma = gamma;
    b.max_depth = max_depth;
    b.min_samples_leaf = static_cast<size_t>(std::max(1, min_samples_leaf));
    return b.run();
}

} // namespace internal

DecisionTree train_tree(const Matrix& X, const std::vector<int>& y, const TreeParams& params) {
    internal::check_dataset(X, y, "train_tree");
    return internal::build_gini_tree(X, y, params, internal::FeatureSampler());
}

} // namespace stylo::ml
