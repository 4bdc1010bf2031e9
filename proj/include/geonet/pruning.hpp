#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "geonet/dataset.hpp"
#include "geonet/network.hpp"

namespace geonet {

/// Record of which weight entries were removed, aligned with the network's
/// layer list (empty matrix for layers without a weight matrix).
struct PruneMask {
    std::vector<Matrix> layer_masks;     // entries in {0,1}, shape of each w
    std::vector<double> layer_sparsity;  // zero fraction per layer (0 if weightless)

    std::size_t zeros() const;
    std::size_t total() const;
};

/// Per-unit activation statistic gathered on a probe set.
struct UnitActivation {
    std::size_t layer = 0; // layer whose output the unit belongs to
    std::size_t unit = 0;  // column within that layer's output
    double mean_abs = 0.0; // mean |activation| over the probe set
    bool pruned = false;
};

/// Effect of bypassing one hidden layer with the identity map.
struct LayerAblation {
    std::size_t layer = 0;
    std::string kind;
    bool ablatable = false; // width-preserving layers only
    double baseline_accuracy = 0.0;
    double ablated_accuracy = 0.0; // 0 when not ablatable
    double drop = 0.0;             // baseline - ablated, 0 when not ablatable
};

struct SensitivityReport {
    std::vector<UnitActivation> units; // one entry per hidden unit
    std::vector<LayerAblation> layers; // one entry per hidden layer
};

/// Globally ranks every weight entry by |value| (ties by layer, row, column)
/// and zeros the smallest floor(fraction * total). Biases are never pruned.
/// Masks are written into the network and returned; calling again with the
/// same fraction reselects the same set.
PruneMask magnitude_prune(Network& net, double fraction);

/// Removes hidden units whose mean |activation| over the probe set is below
/// the threshold: the unit's incoming weight column and its outgoing row in
/// the next weight-bearing layer are zeroed and masked. A unit's activation
/// is read after an immediately following elementwise activation layer, if
/// any. Fails without modifying the network if some layer would lose all of
/// its units. Existing mask zeros are preserved.
std::pair<PruneMask, SensitivityReport> activation_prune(Network& net, const Dataset& probe,
                                                         double threshold);

/// Measures, for every hidden layer, the probe accuracy when that layer is
/// replaced by the identity map. Layers that do not preserve width are
/// flagged non-ablatable and skipped. Requires at least one ablatable
/// hidden layer.
SensitivityReport layer_sensitivity(const Network& net, const Dataset& probe);

/// Installs the mask, zeros the masked weights, and trains; the training
/// loop re-applies the mask after every optimizer step, so masked entries
/// are exactly zero in the result.
TrainingReport fine_tune(Network& net, const PruneMask& mask, const Dataset& train_data,
                         const TrainConfig& config);

} // namespace geonet
