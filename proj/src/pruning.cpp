#include "geonet/pruning.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "geonet/error.hpp"

namespace geonet {

namespace {

bool is_elementwise(LayerKind k) {
    return k == LayerKind::leaky_relu || k == LayerKind::parametric_relu;
}

Matrix ones_like(const Matrix& w) {
    Matrix m(w.rows(), w.cols());
    for (std::size_t e = 0; e < m.size(); ++e) m.data()[e] = 1.0;
    return m;
}

void ensure_mask(Layer& l) {
    if (l.mask.empty()) l.mask = ones_like(l.w);
}

PruneMask snapshot_masks(const Network& net) {
    PruneMask mask;
    mask.layer_masks.reserve(net.layers.size());
    mask.layer_sparsity.reserve(net.layers.size());
    for (const Layer& l : net.layers) {
        if (!l.has_weights()) {
            mask.layer_masks.emplace_back();
            mask.layer_sparsity.push_back(0.0);
            continue;
        }
        Matrix m = l.mask.empty() ? ones_like(l.w) : l.mask;
        std::size_t zeros = 0;
        for (std::size_t e = 0; e < m.size(); ++e) {
            if (m.data()[e] == 0.0) ++zeros;
        }
        mask.layer_sparsity.push_back(m.size() == 0
                                          ? 0.0
                                          : static_cast<double>(zeros) /
                                                static_cast<double>(m.size()));
        mask.layer_masks.push_back(std::move(m));
    }
    return mask;
}

} // namespace

std::size_t PruneMask::zeros() const {
    std::size_t n = 0;
    for (const Matrix& m : layer_masks) {
        for (std::size_t e = 0; e < m.size(); ++e) {
            if (m.data()[e] == 0.0) ++n;
        }
    }
    return n;
}

std::size_t PruneMask::total() const {
    std::size_t n = 0;
    for (const Matrix& m : layer_masks) n += m.size();
    return n;
}

PruneMask magnitude_prune(Network& net, double fraction) {
    net.validate();
    if (!(fraction >= 0.0 && fraction <= 1.0)) {
        fail(errc::invalid_argument, "prune fraction must be in [0,1]");
    }

    struct Entry {
        double mag;
        std::size_t layer;
        std::size_t flat; // row-major position = (row, col) order
    };
    std::vector<Entry> entries;
    for (std::size_t i = 0; i < net.layers.size(); ++i) {
        const Layer& l = net.layers[i];
        if (!l.has_weights()) continue;
        for (std::size_t e = 0; e < l.w.size(); ++e) {
            entries.push_back({std::abs(l.w.data()[e]), i, e});
        }
    }
    const auto n_zero = static_cast<std::size_t>(
        std::floor(fraction * static_cast<double>(entries.size()) + 1e-9));
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        return std::tie(a.mag, a.layer, a.flat) < std::tie(b.mag, b.layer, b.flat);
    });

    for (auto& l : net.layers) {
        if (l.has_weights()) l.mask = ones_like(l.w);
    }
    for (std::size_t r = 0; r < n_zero; ++r) {
        Layer& l = net.layers[entries[r].layer];
        l.mask.data()[entries[r].flat] = 0.0;
        l.w.data()[entries[r].flat] = 0.0;
    }
    return snapshot_masks(net);
}

std::pair<PruneMask, SensitivityReport> activation_prune(Network& net, const Dataset& probe,
                                                         double threshold) {
    net.validate();
    if (probe.size() == 0) fail(errc::invalid_argument, "probe set is empty");
    if (!(threshold >= 0.0)) fail(errc::invalid_argument, "threshold must be >= 0");

    // Hidden weight-bearing layers: all but the last one. Unit activations are
    // read after an immediately following elementwise activation layer.
    std::vector<std::size_t> weight_layers;
    for (std::size_t i = 0; i < net.layers.size(); ++i) {
        if (net.layers[i].has_weights()) weight_layers.push_back(i);
    }
    SensitivityReport report;
    if (weight_layers.size() < 2) {
        return {snapshot_masks(net), report}; // no hidden units to consider
    }
    const std::size_t n_hidden = weight_layers.size() - 1;

    std::vector<std::size_t> measure_at(net.layers.size(), net.layers.size());
    for (std::size_t h = 0; h < n_hidden; ++h) {
        const std::size_t i = weight_layers[h];
        const bool act_follows =
            i + 1 < net.layers.size() && is_elementwise(net.layers[i + 1].kind);
        measure_at[act_follows ? i + 1 : i] = i;
    }

    std::vector<std::vector<double>> mean_abs(net.layers.size());
    Matrix y = probe.features;
    for (std::size_t j = 0; j < net.layers.size(); ++j) {
        y = layer_forward(net.layers[j], y);
        if (measure_at[j] == net.layers.size()) continue;
        std::vector<double> col(y.cols(), 0.0);
        for (std::size_t r = 0; r < y.rows(); ++r) {
            for (std::size_t c = 0; c < y.cols(); ++c) col[c] += std::abs(y(r, c));
        }
        for (double& v : col) v /= static_cast<double>(y.rows());
        mean_abs[measure_at[j]] = std::move(col);
    }

    // Decide the full pruned set, then validate before touching the network.
    std::vector<std::vector<std::size_t>> pruned_units(net.layers.size());
    for (std::size_t h = 0; h < n_hidden; ++h) {
        const std::size_t i = weight_layers[h];
        const std::size_t next = weight_layers[h + 1];
        const auto& means = mean_abs[i];
        std::vector<std::size_t> pruned;
        for (std::size_t u = 0; u < means.size(); ++u) {
            UnitActivation ua;
            ua.layer = i;
            ua.unit = u;
            ua.mean_abs = means[u];
            ua.pruned = means[u] < threshold;
            if (ua.pruned) pruned.push_back(u);
            report.units.push_back(ua);
        }
        if (!pruned.empty() && net.layers[next].kind == LayerKind::rbf) {
            fail(errc::not_prunable,
                 "units of layer " + std::to_string(i) + " feed the kernel layer " +
                     std::to_string(next) + ", which consumes every input dimension");
        }
        if (pruned.size() == means.size()) {
            fail(errc::not_prunable,
                 "threshold would remove every unit of layer " + std::to_string(i) + " (" +
                     layer_kind_name(net.layers[i].kind) + ")");
        }
        pruned_units[i] = std::move(pruned);
    }

    for (std::size_t h = 0; h < n_hidden; ++h) {
        const std::size_t i = weight_layers[h];
        if (pruned_units[i].empty()) continue;
        Layer& l = net.layers[i];
        Layer& out = net.layers[weight_layers[h + 1]];
        ensure_mask(l);
        ensure_mask(out);
        for (std::size_t u : pruned_units[i]) {
            for (std::size_t r = 0; r < l.w.rows(); ++r) {
                l.w(r, u) = 0.0;
                l.mask(r, u) = 0.0;
            }
            for (std::size_t c = 0; c < out.w.cols(); ++c) {
                out.w(u, c) = 0.0;
                out.mask(u, c) = 0.0;
            }
        }
    }
    return {snapshot_masks(net), std::move(report)};
}

SensitivityReport layer_sensitivity(const Network& net, const Dataset& probe) {
    net.validate();
    if (probe.size() == 0) fail(errc::invalid_argument, "probe set is empty");
    if (net.layers.size() < 2) {
        fail(errc::invalid_argument, "network has no hidden layers to ablate");
    }

    const double baseline = evaluate(net, probe).accuracy;
    SensitivityReport report;
    std::size_t ablatable_count = 0;
    for (std::size_t i = 0; i + 1 < net.layers.size(); ++i) {
        const Layer& l = net.layers[i];
        LayerAblation la;
        la.layer = i;
        la.kind = layer_kind_name(l.kind);
        la.baseline_accuracy = baseline;
        // Identity bypass needs the layer to preserve width; elementwise
        // layers always do, weight-bearing ones only when square.
        la.ablatable = l.in_dim() == 0 || l.in_dim() == l.out_dim();
        if (la.ablatable) {
            ++ablatable_count;
            Network ablated = net;
            ablated.layers.erase(ablated.layers.begin() +
                                 static_cast<std::ptrdiff_t>(i));
            la.ablated_accuracy = evaluate(ablated, probe).accuracy;
            la.drop = baseline - la.ablated_accuracy;
        }
        report.layers.push_back(std::move(la));
    }
    if (ablatable_count == 0) {
        fail(errc::invalid_argument, "network has no ablatable hidden layer");
    }
    return report;
}

TrainingReport fine_tune(Network& net, const PruneMask& mask, const Dataset& train_data,
                         const TrainConfig& config) {
    if (mask.layer_masks.size() != net.layers.size()) {
        fail(errc::dimension_mismatch, "mask does not cover every layer");
    }
    for (std::size_t i = 0; i < net.layers.size(); ++i) {
        const Matrix& m = mask.layer_masks[i];
        Layer& l = net.layers[i];
        if (!l.has_weights()) {
            if (!m.empty()) {
                fail(errc::dimension_mismatch,
                     "mask given for weightless layer " + std::to_string(i));
            }
            continue;
        }
        if (m.empty()) {
            l.mask = Matrix();
            continue;
        }
        if (m.rows() != l.w.rows() || m.cols() != l.w.cols()) {
            fail(errc::dimension_mismatch, "mask shape mismatch at layer " + std::to_string(i));
        }
        for (std::size_t e = 0; e < m.size(); ++e) {
            if (m.data()[e] != 0.0 && m.data()[e] != 1.0) {
                fail(errc::invalid_argument, "mask entries must be 0 or 1");
            }
        }
        l.mask = m;
    }
    apply_masks(net);
    return train(net, train_data, config);
}

} // namespace geonet
