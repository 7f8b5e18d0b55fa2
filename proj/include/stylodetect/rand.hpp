#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "stylodetect/util.hpp"

namespace stylo {

// Deterministic RNG wrapper. std::*_distribution is implementation-defined,
// so sampling is done by hand here; models trained with the same seed hash
// identically across platforms.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed ? seed : 0x9E3779B97F4A7C15ULL) {
        // warm up splitmix so nearby seeds diverge
        next();
        next();
    }

    uint64_t next() {
        uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, bound)
    uint64_t uniform_u64(uint64_t bound) { return bound ? next() % bound : 0; }

    size_t index(size_t n) { return static_cast<size_t>(uniform_u64(n)); }

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Box-Muller; caches the second draw.
    double gauss() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        while (u1 <= 1e-300) u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = index(i);
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    uint64_t state_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// Independent substream seed for worker i (forest trees, folds, cells).
inline uint64_t substream_seed(uint64_t seed, uint64_t index) {
    return fnv1a64_mix(fnv1a64_mix(1469598103934665603ULL, seed), index + 1);
}

inline uint64_t substream_seed(uint64_t seed, std::string_view tag, uint64_t index = 0) {
    return fnv1a64_mix(fnv1a64(tag, fnv1a64_mix(1469598103934665603ULL, seed)), index + 1);
}

} // namespace stylo
