#pragma once

#include <stdexcept>
#include <vector>

namespace stylo::metrics {

// Binary confusion counts; the positive class is label 1.
struct Confusion {
    long tp = 0, fp = 0, tn = 0, fn = 0;
    long total() const { return tp + fp + tn + fn; }
};

inline Confusion confusion(const std::vector<int>& truth, const std::vector<int>& predicted) {
    if (truth.size() != predicted.size())
        throw std::invalid_argument("confusion: label vectors differ in length");
    Confusion c;
    for (size_t i = 0; i < truth.size(); ++i) {
        if (predicted[i] == 1)
            (truth[i] == 1 ? c.tp : c.fp)++;
        else
            (truth[i] == 1 ? c.fn : c.tn)++;
    }
    return c;
}

inline double accuracy(const Confusion& c) {
    return c.total() == 0 ? 0.0 : static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
}

inline double precision(const Confusion& c) {
    return c.tp + c.fp == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
}

inline double recall(const Confusion& c) {
    return c.tp + c.fn == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
}

inline double f1(const Confusion& c) {
    double p = precision(c), r = recall(c);
    return p + r == 0 ? 0.0 : 2 * p * r / (p + r);
}

inline double accuracy(const std::vector<int>& truth, const std::vector<int>& predicted) {
    return accuracy(confusion(truth, predicted));
}

inline double f1(const std::vector<int>& truth, const std::vector<int>& predicted) {
    return f1(confusion(truth, predicted));
}

} // namespace stylo::metrics
