#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "geonet/dataset.hpp"
#include "geonet/layers.hpp"

namespace geonet {

/// Feed-forward stack of layers. Adjacent widths must chain (elementwise
/// activation layers pass any width through).
struct Network {
    std::vector<Layer> layers;

    std::size_t input_dim() const;
    std::size_t output_dim() const;
    void validate() const; // checks the width chain and parameter shapes
};

/// Everything backward() needs from the forward pass: per-layer inputs, rbf
/// unit activations, and the dropout keep-masks (already scaled by 1/(1-p))
/// that multiplied each layer's output.
struct ForwardCache {
    std::vector<Matrix> inputs;
    std::vector<Matrix> phi;
    std::vector<Matrix> dropout;
    Matrix output;
};

/// Evaluation-mode forward pass (no dropout).
Matrix forward(const Network& net, const Matrix& x);

/// Training-mode forward pass. Inverted dropout with keep probability
/// 1 - dropout_p is applied to every layer output except the last; surviving
/// activations are scaled by 1/(1-dropout_p) so evaluation needs no rescale.
Matrix forward_train(const Network& net, const Matrix& x, double dropout_p, Rng& rng,
                     ForwardCache& cache);

/// Backpropagates grad_output through the cached pass, filling every layer's
/// gradient fields. Returns the gradient w.r.t. the network input.
Matrix backward(Network& net, const ForwardCache& cache, const Matrix& grad_output);

/// Softmax cross-entropy, max-shifted for stability. Returns (mean loss,
/// gradient w.r.t. logits). Labels must be valid class indices.
std::pair<double, Matrix> cross_entropy_loss(const Matrix& logits,
                                             const std::vector<int>& labels);

/// Mean squared reconstruction error: (1/n) * sum_i |x_i - t_i|^2 over rows.
std::pair<double, Matrix> mse_loss(const Matrix& pred, const Matrix& target);

struct TrainConfig {
    std::size_t epochs = 500;
    std::size_t batch_size = 32;
    std::string optimizer = "adam"; // or "sgd"
    double lr = 1e-3;
    double weight_decay = 0.0; // decoupled; applied to weight matrices only
    double dropout_p = 0.0;
    std::uint64_t seed = 0;
};

struct TrainingReport {
    std::vector<double> epoch_loss;     // mean batch loss per epoch
    std::vector<double> epoch_accuracy; // training accuracy per epoch (from the pass itself)
    double wall_seconds = 0.0;
};

/// Minibatch training against softmax cross-entropy. Deterministic given
/// (seed, config, data). Prune masks are re-applied after every optimizer
/// step. Non-finite loss aborts with the epoch and batch in the message.
TrainingReport train(Network& net, const Dataset& data, const TrainConfig& config);

/// Same loop with MSE against a target matrix (row-aligned with x).
TrainingReport train_regression(Network& net, const Matrix& x, const Matrix& target,
                                const TrainConfig& config);

struct EvalResult {
    double accuracy = 0.0;
    Matrix confusion;                 // classes x classes; row = true label
    std::vector<int> predictions;     // per sample
};

/// Read-only evaluation, sharded across threads with a deterministic
/// order-preserving merge. Ties in the argmax go to the lowest class index.
EvalResult evaluate(const Network& net, const Dataset& data);

/// Zeroes every masked weight (layers with a non-empty mask).
void apply_masks(Network& net);

} // namespace geonet
