#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "ml_internal.hpp"

namespace stylo::ml {

Scaler Scaler::fit(const Matrix& X) {
    if (X.empty()) throw std::invalid_argument("scaler fit: empty matrix");
    size_t d = X[0].size();
    Scaler s;
    s.mean.assign(d, 0.0);
    s.stdev.assign(d, 0.0);
    for (const auto& row : X)
        for (size_t j = 0; j < d; ++j) s.mean[j] += row[j];
    for (size_t j = 0; j < d; ++j) s.mean[j] /= static_cast<double>(X.size());
    for (const auto& row : X)
        for (size_t j = 0; j < d; ++j) {
            double delta = row[j] - s.mean[j];
            s.stdev[j] += delta * delta;
        }
    for (size_t j = 0; j < d; ++j)
        s.stdev[j] = std::sqrt(s.stdev[j] / static_cast<double>(X.size()));
    return s;
}

std::vector<double> Scaler::apply(const std::vector<double>& x) const {
    if (x.size() != mean.size())
        throw std::invalid_argument("scaler: expected " + std::to_string(mean.size()) +
                                    " features, got " + std::to_string(x.size()));
    std::vector<double> out(x.size());
    for (size_t j = 0; j < x.size(); ++j)
        out[j] = stdev[j] > 0.0 ? (x[j] - mean[j]) / stdev[j] : x[j];
    return out;
}

Matrix Scaler::apply(const Matrix& X) const {
    Matrix out;
    out.reserve(X.size());
    for (const auto& row : X) out.push_back(apply(row));
    return out;
}

namespace detail {

Net init_net(size_t d, int hidden, Rng& rng) {
    size_t h = static_cast<size_t>(hidden);
    Net net;
    net.w1.assign(h, std::vector<double>(d));
    net.b1.assign(h, 0.0);
    net.w2.assign(h, 0.0);
    double s1 = std::sqrt(2.0 / static_cast<double>(d));
    double s2 = std::sqrt(2.0 / static_cast<double>(h));
    for (auto& row : net.w1)
        for (auto& w : row) w = rng.gauss() * s1;
    for (auto& w : net.w2) w = rng.gauss() * s2;
    return net;
}

double Net::forward(const std::vector<double>& x) const {
    double z2 = b2;
    for (size_t i = 0; i < w1.size(); ++i) {
        double z = b1[i];
        for (size_t j = 0; j < x.size(); ++j) z += w1[i][j] * x[j];
        if (z > 0.0) z2 += w2[i] * z;
    }
    return internal::sigmoid(z2);
}

double batch_loss(const Net& net, const Matrix& X, const std::vector<int>& y) {
    double loss = 0.0;
    for (size_t i = 0; i < X.size(); ++i) {
        double p = std::clamp(net.forward(X[i]), 1e-12, 1.0 - 1e-12);
        loss -= y[i] == 1 ? std::log(p) : std::log(1.0 - p);
    }
    return loss / static_cast<double>(X.size());
}

NetGrad batch_gradient(const Net& net, const Matrix& X, const std::vector<int>& y) {
    size_t h = net.w1.size();
    size_t d = net.w1.empty() ? 0 : net.w1[0].size();
    NetGrad g;
    g.w1.assign(h, std::vector<double>(d, 0.0));
    g.b1.assign(h, 0.0);
    g.w2.assign(h, 0.0);

    std::vector<double> a1(h);
    for (size_t i = 0; i < X.size(); ++i) {
        const auto& x = X[i];
        double z2 = net.b2;
        for (size_t k = 0; k < h; ++k) {
            double z = net.b1[k];
            for (size_t j = 0; j < d; ++j) z += net.w1[k][j] * x[j];
            a1[k] = z > 0.0 ? z : 0.0;
            z2 += net.w2[k] * a1[k];
        }
        double dz2 = internal::sigmoid(z2) - static_cast<double>(y[i]);
        g.b2 += dz2;
        for (size_t k = 0; k < h; ++k) {
            g.w2[k] += dz2 * a1[k];
            if (a1[k] > 0.0) {
                double dz1 = dz2 * net.w2[k];
                g.b1[k] += dz1;
                for (size_t j = 0; j < d; ++j) g.w1[k][j] += dz1 * x[j];
            }
        }
    }
    double inv = 1.0 / static_cast<double>(X.size());
    for (auto& row : g.w1)
        for (auto& v : row) v *= inv;
    for (auto& v : g.b1) v *= inv;
    for (auto& v : g.w2) v *= inv;
    g.b2 *= inv;
    return g;
}

} // namespace detail

namespace {

// Adam moments, one pair per parameter, updated in lockstep with the net.
struct AdamState {
    detail::NetGrad m, v;
    long step = 0;

    explicit AdamState(const detail::Net& net) {
        m.w1.assign(net.w1.size(), std::vector<double>(net.w1.empty() ? 0 : net.w1[0].size(), 0.0));
        m.b1.assign(net.b1.size(), 0.0);
        m.w2.assign(net.w2.size(), 0.0);
        v = m;
    }

    void update(detail::Net& net, const detail::NetGrad& g, double lr) {
        constexpr double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
        ++step;
        double c1 = 1.0 - std::pow(beta1, static_cast<double>(step));
        double c2 = 1.0 - std::pow(beta2, static_cast<double>(step));
        auto one = [&](double& w, double grad, double& mm, double& vv) {
            mm = beta1 * mm + (1.0 - beta1) * grad;
            vv = beta2 * vv + (1.0 - beta2) * grad * grad;
            w -= lr * (mm / c1) / (std::sqrt(vv / c2) + eps);
        };
        for (size_t i = 0; i < net.w1.size(); ++i)
            for (size_t j = 0; j < net.w1[i].size(); ++j)
                one(net.w1[i][j], g.w1[i][j], m.w1[i][j], v.w1[i][j]);
        for (size_t i = 0; i < net.b1.size(); ++i) one(net.b1[i], g.b1[i], m.b1[i], v.b1[i]);
        for (size_t i = 0; i < net.w2.size(); ++i) one(net.w2[i], g.w2[i], m.w2[i], v.w2[i]);
        one(net.b2, g.b2, m.b2, v.b2);
    }
};

} // namespace

MlpModel train_mlp(const Matrix& train_X, const std::vector<int>& train_y, const Matrix& val_X,
                   const std::vector<int>& val_y, const MlpParams& params, uint64_t seed) {
    internal::check_dataset(train_X, train_y, "train_mlp");
    size_t d = train_X[0].size();
    internal::check_optional_set(val_X, val_y, d, "train_mlp validation");
    if (params.hidden <= 0) throw std::invalid_argument("train_mlp: hidden must be positive");
    if (params.batch <= 0) throw std::invalid_argument("train_mlp: batch must be positive");
    if (params.max_epochs < 0)
        throw std::invalid_argument("train_mlp: max_epochs must be non-negative");

    MlpModel model;
    model.scaler = Scaler::fit(train_X);
    model.n_features = d;
    Matrix tx = model.scaler.apply(train_X);
    Matrix vx = model.scaler.apply(val_X);

    Rng rng(seed);
    detail::Net net = detail::init_net(d, params.hidden, rng);
    AdamState adam(net);

    bool has_val = !vx.empty();
    detail::Net best = net;
    double best_val = std::numeric_limits<double>::infinity();
    int since_best = 0;
    double last_train_loss = detail::batch_loss(net, tx, train_y);

    std::vector<size_t> idx(tx.size());
    std::iota(idx.begin(), idx.end(), 0);
    size_t batch = static_cast<size_t>(params.batch);

    for (int epoch = 1; epoch <= params.max_epochs; ++epoch) {
        rng.shuffle(idx);
        for (size_t start = 0; start < idx.size(); start += batch) {
            size_t stop = std::min(start + batch, idx.size());
            Matrix bx(stop - start);
            std::vector<int> by(stop - start);
            for (size_t i = start; i < stop; ++i) {
                bx[i - start] = tx[idx[i]];
                by[i - start] = train_y[idx[i]];
            }
            adam.update(net, detail::batch_gradient(net, bx, by), params.lr);
        }
        model.epochs_run = epoch;
        last_train_loss = detail::batch_loss(net, tx, train_y);
        if (!std::isfinite(last_train_loss))
            throw std::runtime_error("mlp training diverged at epoch " + std::to_string(epoch) +
                                     " (non-finite loss)");
        if (has_val) {
            double vl = detail::batch_loss(net, vx, val_y);
            if (vl < best_val - 1e-12) {
                best_val = vl;
                best = net;
                since_best = 0;
            } else if (params.patience > 0 && ++since_best >= params.patience) {
                break;
            }
        }
    }

    if (has_val) {
        model.net = std::move(best);
        model.best_val_loss = best_val;
    } else {
        model.net = std::move(net);
        model.best_val_loss = last_train_loss;
    }
    return model;
}

double MlpModel::predict_proba(const std::vector<double>& x) const {
    if (x.size() != n_features)
        throw std::invalid_argument("mlp predict: expected " + std::to_string(n_features) +
                                    " features, got " + std::to_string(x.size()));
    return net.forward(scaler.apply(x));
}

int MlpModel::predict(const std::vector<double>& x) const {
    return predict_proba(x) > 0.5 ? 1 : 0;
}

} // namespace stylo::ml
