#include "geonet/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "geonet/error.hpp"

namespace geonet {

int Dataset::n_classes() const noexcept {
    int top = -1;
    for (int l : labels) top = std::max(top, l);
    return top + 1;
}

Dataset gen_xor(std::size_t n, double noise_std, Rng& rng) {
    if (n < 4 || n % 4 != 0) fail(errc::invalid_argument, "sample count must be a positive multiple of 4");
    if (noise_std < 0.0) fail(errc::invalid_argument, "noise std must be >= 0");

    // Corner order fixed so generation is reproducible: label = XOR parity.
    constexpr double corners[4][2] = {{0, 0}, {1, 1}, {0, 1}, {1, 0}};
    constexpr int corner_label[4] = {0, 0, 1, 1};

    Dataset d;
    d.name = "xor";
    d.features = Matrix(n, 2);
    d.labels.resize(n);
    std::size_t row = 0;
    for (int c = 0; c < 4; ++c) {
        for (std::size_t i = 0; i < n / 4; ++i, ++row) {
            d.features(row, 0) = corners[c][0] + rng.gaussian(0.0, noise_std);
            d.features(row, 1) = corners[c][1] + rng.gaussian(0.0, noise_std);
            d.labels[row] = corner_label[c];
        }
    }
    return d;
}

Dataset gen_circles(std::size_t n, double inner_radius, double outer_radius,
                    double noise_std, Rng& rng) {
    if (n < 2 || n % 2 != 0) fail(errc::invalid_argument, "sample count must be a positive even number");
    if (!(0.0 < inner_radius && inner_radius < outer_radius)) {
        fail(errc::invalid_argument, "radii must satisfy 0 < inner < outer");
    }
    if (noise_std < 0.0) fail(errc::invalid_argument, "noise std must be >= 0");

    Dataset d;
    d.name = "circles";
    d.features = Matrix(n, 2);
    d.labels.resize(n);
    const double radii[2] = {outer_radius, inner_radius}; // class 0 = outer ring
    std::size_t row = 0;
    for (int c = 0; c < 2; ++c) {
        for (std::size_t i = 0; i < n / 2; ++i, ++row) {
            const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
            const double r = radii[c] + rng.gaussian(0.0, noise_std);
            d.features(row, 0) = r * std::cos(theta);
            d.features(row, 1) = r * std::sin(theta);
            d.labels[row] = c;
        }
    }
    return d;
}

Dataset gen_moons(std::size_t n, double noise_std, Rng& rng) {
    if (n < 2 || n % 2 != 0) fail(errc::invalid_argument, "sample count must be a positive even number");
    if (noise_std < 0.0) fail(errc::invalid_argument, "noise std must be >= 0");

    Dataset d;
    d.name = "moons";
    d.features = Matrix(n, 2);
    d.labels.resize(n);
    std::size_t row = 0;
    for (int c = 0; c < 2; ++c) {
        const double dx = c == 0 ? 0.0 : 1.0;
        const double dy = c == 0 ? 0.0 : -0.5;
        for (std::size_t i = 0; i < n / 2; ++i, ++row) {
            const double t = rng.uniform(0.0, std::numbers::pi);
            d.features(row, 0) = std::cos(t) + dx + rng.gaussian(0.0, noise_std);
            d.features(row, 1) = std::sin(t) + dy + rng.gaussian(0.0, noise_std);
            d.labels[row] = c;
        }
    }
    return d;
}

Dataset gen_gaussian_mixture(std::size_t n, const std::vector<std::vector<double>>& centers,
                             double stddev, Rng& rng) {
    if (centers.empty()) fail(errc::invalid_argument, "need at least one mixture center");
    if (n < centers.size()) fail(errc::invalid_argument, "need at least one sample per center");
    if (stddev < 0.0) fail(errc::invalid_argument, "stddev must be >= 0");
    const std::size_t dim = centers[0].size();
    if (dim == 0) fail(errc::invalid_argument, "centers must have at least one coordinate");
    for (const auto& c : centers) {
        if (c.size() != dim) fail(errc::dimension_mismatch, "mixture centers differ in dimension");
    }

    Dataset d;
    d.name = "gaussian_mixture";
    d.features = Matrix(n, dim);
    d.labels.resize(n);
    const std::size_t k = centers.size();
    std::size_t row = 0;
    for (std::size_t c = 0; c < k; ++c) {
        const std::size_t count = n / k + (c < n % k ? 1 : 0);
        for (std::size_t i = 0; i < count; ++i, ++row) {
            for (std::size_t j = 0; j < dim; ++j) {
                d.features(row, j) = centers[c][j] + rng.gaussian(0.0, stddev);
            }
            d.labels[row] = static_cast<int>(c);
        }
    }
    return d;
}

std::pair<Dataset, Dataset> split(const Dataset& d, double train_fraction, Rng& rng) {
    if (!(0.0 < train_fraction && train_fraction < 1.0)) {
        fail(errc::invalid_argument, "train fraction must be in (0,1)");
    }
    const int classes = d.n_classes();
    std::vector<std::vector<std::size_t>> by_class(classes);
    for (std::size_t i = 0; i < d.size(); ++i) by_class[d.labels[i]].push_back(i);

    std::vector<std::size_t> train_idx;
    std::vector<std::size_t> test_idx;
    for (int c = 0; c < classes; ++c) {
        auto& idx = by_class[c];
        if (idx.size() < 2) {
            fail(errc::invalid_argument,
                 "class " + std::to_string(c) + " has fewer than 2 samples; cannot stratify");
        }
        rng.shuffle(idx);
        auto take = static_cast<std::size_t>(std::lround(train_fraction * static_cast<double>(idx.size())));
        take = std::clamp<std::size_t>(take, 1, idx.size() - 1);
        train_idx.insert(train_idx.end(), idx.begin(), idx.begin() + take);
        test_idx.insert(test_idx.end(), idx.begin() + take, idx.end());
    }
    rng.shuffle(train_idx);
    rng.shuffle(test_idx);

    auto gather = [&d](const std::vector<std::size_t>& idx, const char* suffix) {
        Dataset out;
        out.name = d.name + suffix;
        out.features = Matrix(idx.size(), d.dim());
        out.labels.resize(idx.size());
        for (std::size_t i = 0; i < idx.size(); ++i) {
            for (std::size_t j = 0; j < d.dim(); ++j) out.features(i, j) = d.features(idx[i], j);
            out.labels[i] = d.labels[idx[i]];
        }
        return out;
    };
    return {gather(train_idx, "/train"), gather(test_idx, "/test")};
}

} // namespace geonet
