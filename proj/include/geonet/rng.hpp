#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "geonet/error.hpp"

namespace geonet {

/// Seedable deterministic generator. The engine is std::mt19937_64, whose
/// output sequence is fixed by the standard, so streams are identical across
/// platforms. All value mappings (uniform doubles, gaussians) are done here
/// rather than through std::*_distribution, which is not portable.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1) with 53 bits of precision.
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi). Requires lo < hi.
    double uniform(double lo, double hi) {
        if (!(lo < hi))
            fail(errc::invalid_argument, "uniform: lo must be < hi");
        return lo + (hi - lo) * unit();
    }

    /// Gaussian draw via Box-Muller with a cached spare. stddev = 0 returns mean exactly.
    double gaussian(double mean, double stddev);

    /// Uniform index in [0, n). Requires n > 0.
    std::size_t uniform_index(std::size_t n) {
        if (n == 0)
            fail(errc::invalid_argument, "uniform_index: n must be > 0");
        return static_cast<std::size_t>(engine_() % n);
    }

    /// Bernoulli draw with success probability p.
    bool bernoulli(double p) { return unit() < p; }

    /// Fisher-Yates shuffle, deterministic per seed.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = uniform_index(i);
            std::swap(v[i - 1], v[j]);
        }
    }

    /// k distinct indices from [0, n), sampled without replacement, in draw order.
    std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k);

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

} // namespace geonet
