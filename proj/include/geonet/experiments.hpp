#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"

#include "geonet/dataset.hpp"
#include "geonet/layers.hpp"
#include "geonet/network.hpp"

namespace geonet {

/// Self-describing experiment result: the config echo is sufficient to re-run
/// the experiment exactly (same binary, same output minus wall times).
struct ExperimentReport {
    std::string name;
    nlohmann::json config;
    nlohmann::json metrics;
    nlohmann::json environment; // version + seed stamp
    std::string grid_csv;       // decision-boundary samples; empty if not sampled

    nlohmann::json to_json() const;
    std::string to_json_string() const { return to_json().dump(2) + "\n"; }
};

/// Training defaults for the 2-d reference experiments: the small nets take a
/// larger step size than the image classifiers.
inline TrainConfig default_activation_train() {
    TrainConfig tc;
    tc.lr = 0.01;
    return tc;
}

struct ActivationExperimentConfig {
    std::string dataset = "xor";        // xor | circles | moons
    std::string activation = "poly:2";  // poly:<d> | rbf:<units> | lrelu:<a> | prelu
    std::size_t n = 600;                // generated points (before split)
    double train_fraction = 0.75;
    std::uint64_t seed = 0;
    TrainConfig train = default_activation_train(); // seed is overridden by `seed`
    std::size_t grid = 200; // decision boundary sampled on a grid x grid lattice
};

/// Generates the named 2-d dataset, trains the reference architecture for the
/// activation spec, and reports train/test accuracy, wall time, and the
/// decision boundary over the data bounding box as CSV (x0,x1,label).
ExperimentReport run_activation_experiment(const ActivationExperimentConfig& cfg);

struct DimredExperimentConfig {
    std::string method = "baseline"; // baseline | pca:<k> | ae:<latent> | prune:<f>
    std::string train_images;
    std::string train_labels;
    std::string test_images;
    std::string test_labels;
    std::size_t train_cap = 10000; // 0 = use all
    std::size_t test_cap = 2000;
    std::uint64_t seed = 0;
    TrainConfig train;                 // classifier training settings
    std::size_t fine_tune_epochs = 2;  // prune method only
    std::size_t ae_epochs = 5;         // autoencoder pre-training epochs
};

/// End-to-end image-classification pipeline: optionally reduce (projection or
/// autoencoder) or prune+fine-tune, then report accuracy and timing.
ExperimentReport run_dimred_experiment(const DimredExperimentConfig& cfg);

/// Reference architecture for a 2-d two-class problem: kernel units get a
/// single bundled layer; polynomial and affine stacks get one 16-unit hidden
/// layer with a leaky-relu non-linearity.
Network make_reference_net(const ActivationSpec& spec, const Dataset& train, Rng& rng);

/// Class predictions on a grid x grid lattice spanning the data bounding box,
/// one "x0,x1,label" row per point (header line included).
std::string decision_grid_csv(const Network& net, const Dataset& data, std::size_t grid);

} // namespace geonet
