#pragma once

#include <vector>

#include "geonet/network.hpp"

namespace geonet {

/// A trainable tensor of the network plus its gradient buffer. weight_decay
/// marks tensors subject to decay (weight matrices; never biases or slopes);
/// clamp01 keeps the value inside (0,1) after updates (parametric-relu slope).
struct ParamSlot {
    Matrix* value = nullptr;
    const Matrix* grad = nullptr;
    bool weight_decay = false;
    bool clamp01 = false;
};

/// Enumerates trainable tensors in a fixed order: per layer, weights, bias,
/// then (when trainable) rbf centers/sigma or the parametric-relu slope.
std::vector<ParamSlot> trainable_params(Network& net);

struct OptimizerConfig {
    bool adam = true; // false = plain SGD
    double lr = 1e-3;
    double weight_decay = 0.0; // decoupled: value -= lr * wd * value
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

/// SGD / Adam with decoupled weight decay. The gradient update and the decay
/// term are independent, so a zero gradient leaves parameters unchanged when
/// weight_decay = 0 and shrinks decayed weights strictly monotonically when
/// weight_decay > 0.
class Optimizer {
public:
    explicit Optimizer(OptimizerConfig config) : config_(config) {}

    /// Applies one update from the gradients currently stored in the layers.
    void step(Network& net);

    std::size_t steps_taken() const noexcept { return t_; }

private:
    OptimizerConfig config_;
    std::size_t t_ = 0;
    std::vector<Matrix> m_; // Adam first moments, lazily shaped
    std::vector<Matrix> v_; // Adam second moments
};

} // namespace geonet
