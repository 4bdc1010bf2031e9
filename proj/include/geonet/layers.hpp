#pragma once

#include <string>

#include "geonet/dataset.hpp"
#include "geonet/matrix.hpp"
#include "geonet/rng.hpp"

namespace geonet {

enum class LayerKind {
    affine,          // y = x*w + b
    polynomial,      // y[j] = sum_i w[i][j] * x[i]^d + b[j]
    rbf,             // RBF units phi_u = exp(-|x-c_u|^2 / (2 sigma_u^2)) + linear readout
    leaky_relu,      // f(x) = x if x > 0 else alpha*x, fixed alpha
    parametric_relu, // same map, alpha is a learnable scalar
};

const char* layer_kind_name(LayerKind k);

/// One network layer. Which fields are meaningful depends on kind:
///   affine / polynomial: w (in x out), b (1 x out), degree (polynomial only)
///   rbf: centers (units x in), sigma (1 x units), w = readout (units x out), b
///   leaky_relu / parametric_relu: alpha (1 x 1)
/// mask, when non-empty, has w's shape; zero entries pin weights to zero.
/// The g* fields hold the gradients of the most recent backward pass.
struct Layer {
    LayerKind kind = LayerKind::affine;
    unsigned degree = 1;
    Matrix w, b;
    Matrix centers, sigma;
    Matrix alpha;
    bool train_kernel = false; // rbf: also learn centers and sigma
    Matrix mask;

    Matrix gw, gb, gcenters, gsigma, galpha;

    /// 0 means "any width" (elementwise activation layers).
    std::size_t in_dim() const;
    std::size_t out_dim() const;
    bool has_weights() const noexcept {
        return kind == LayerKind::affine || kind == LayerKind::polynomial ||
               kind == LayerKind::rbf;
    }
};

/// Xavier-uniform weights (range ±sqrt(6/(fan_in+fan_out))), zero bias.
Layer make_affine(std::size_t in, std::size_t out, Rng& rng);

/// Same init; degree >= 1 required.
Layer make_polynomial(std::size_t in, std::size_t out, unsigned degree, Rng& rng);

/// Centers = n_units distinct training rows sampled without replacement;
/// every sigma = mean pairwise distance among the chosen centers (1.0 when
/// there is a single center); Xavier-init readout to out_dim.
Layer make_rbf(const Dataset& train, std::size_t n_units, std::size_t out_dim, Rng& rng);

/// Requires 0 < alpha < 1.
Layer make_leaky_relu(double alpha);
Layer make_parametric_relu(double alpha_init = 0.01);

/// Forward pass of a single layer. For rbf, phi_out (when non-null) receives
/// the unit activations the backward pass needs.
Matrix layer_forward(const Layer& layer, const Matrix& x, Matrix* phi_out = nullptr);

/// Backward pass: fills the layer's gradient fields from the forward input
/// (and phi for rbf) and returns the gradient w.r.t. x.
Matrix layer_backward(Layer& layer, const Matrix& x, const Matrix& phi,
                      const Matrix& upstream);

/// Parsed activation spec string: `poly:<degree>`, `rbf:<n_units>`,
/// `lrelu:<alpha>`, or `prelu`.
struct ActivationSpec {
    LayerKind kind = LayerKind::leaky_relu;
    unsigned degree = 0;     // poly
    std::size_t n_units = 0; // rbf
    double alpha = 0.01;     // lrelu / prelu initial
};

ActivationSpec parse_activation_spec(const std::string& spec);

} // namespace geonet
