#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "geonet/matrix.hpp"
#include "geonet/network.hpp"
#include "geonet/rng.hpp"

namespace geonet {

/// Principal-component projection fitted to a data matrix.
///
/// `components` holds one unit-length direction per column, ordered by
/// decreasing variance; `eigenvalues` keeps the full spectrum (all input
/// dimensions, descending) so the explained-variance ratio of the kept
/// directions can be computed against the total.
struct PCAModel {
    Matrix mean;                     // 1 x d, feature means of the fit data
    Matrix components;               // d x k, column j = j-th direction
    std::vector<double> eigenvalues; // all d variances, descending

    std::size_t dim() const { return components.rows(); }
    std::size_t k() const { return components.cols(); }

    /// Fraction of total variance captured by the kept directions.
    /// Zero-variance data counts as fully captured.
    double explained_variance_ratio() const;
};

/// Fits a k-component projection: center the data, eigendecompose the
/// (1/n)-normalized covariance, keep the top-k directions.
/// Requires 1 <= k <= columns and at least two rows.
PCAModel pca_fit(const Matrix& x, std::size_t k);

/// Projects rows into the component space: (x - mean) * components.
Matrix pca_transform(const PCAModel& model, const Matrix& x);

/// Maps component-space rows back: z * components^T + mean.
Matrix pca_inverse(const PCAModel& model, const Matrix& z);

/// Mean over rows of the squared reconstruction distance ||x_i - xhat_i||^2.
double reconstruction_error(const Matrix& x, const Matrix& xhat);

/// Symmetric bottleneck network: encoder d -> hidden -> latent and decoder
/// latent -> hidden -> d, trained jointly to reproduce its input.
struct Autoencoder {
    Network encoder;
    Network decoder;

    std::size_t latent_dim() const { return encoder.output_dim(); }
    std::size_t dim() const { return encoder.input_dim(); }
};

/// Builds an untrained autoencoder with leaky-relu hidden activations.
Autoencoder make_autoencoder(std::size_t dim, std::size_t hidden, std::size_t latent,
                             Rng& rng);

/// Trains encoder and decoder jointly on the reconstruction objective
/// (mean squared error against the input itself).
TrainingReport ae_train(Autoencoder& ae, const Matrix& x, const TrainConfig& config);

/// Convenience form: builds an autoencoder with the given bottleneck width
/// (hidden width chosen automatically), trains it on `x`, and returns the
/// trained model together with the final reconstruction loss.
std::pair<Autoencoder, double> ae_train(const Matrix& x, std::size_t latent,
                                        const TrainConfig& config);

Matrix ae_encode(const Autoencoder& ae, const Matrix& x);
Matrix ae_decode(const Autoencoder& ae, const Matrix& z);

} // namespace geonet
