#pragma once

#include <string>
#include <utility>
#include <vector>

#include "geonet/matrix.hpp"
#include "geonet/rng.hpp"

namespace geonet {

/// Labeled feature matrix: one sample per row, integer class labels.
struct Dataset {
    Matrix features;         // n × d
    std::vector<int> labels; // size n, values in [0, n_classes)
    std::string name;

    std::size_t size() const noexcept { return features.rows(); }
    std::size_t dim() const noexcept { return features.cols(); }
    int n_classes() const noexcept;
};

/// n/4 noisy copies of each corner: (0,0) and (1,1) labeled 0, (0,1) and
/// (1,0) labeled 1, Gaussian noise per coordinate. n must be divisible by 4.
Dataset gen_xor(std::size_t n, double noise_std, Rng& rng);

/// Two concentric rings, n/2 points each: class 0 on the outer radius,
/// class 1 on the inner. Angles uniform in [0,2pi), Gaussian radial noise.
/// Requires 0 < inner_radius < outer_radius and even n.
Dataset gen_circles(std::size_t n, double inner_radius, double outer_radius,
                    double noise_std, Rng& rng);

/// Two interleaving half-circle arcs: class 0 on the unit upper arc centered
/// at the origin, class 1 on the same arc shifted by (1, -0.5). Isotropic
/// Gaussian noise. Requires even n.
Dataset gen_moons(std::size_t n, double noise_std, Rng& rng);

/// One isotropic Gaussian blob per center; class = center index. Samples are
/// spread as evenly as possible across centers.
Dataset gen_gaussian_mixture(std::size_t n, const std::vector<std::vector<double>>& centers,
                             double stddev, Rng& rng);

/// Stratified split: per class, round(fraction * count) samples (clamped so
/// both sides get at least one) go to train after a seeded shuffle. Every
/// class needs at least 2 samples.
std::pair<Dataset, Dataset> split(const Dataset& d, double train_fraction, Rng& rng);

} // namespace geonet
