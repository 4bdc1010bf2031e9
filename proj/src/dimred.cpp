#include "geonet/dimred.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "geonet/eigen.hpp"
#include "geonet/error.hpp"

namespace geonet {

double PCAModel::explained_variance_ratio() const {
    double total = 0.0;
    double kept = 0.0;
    for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
        const double v = std::max(eigenvalues[i], 0.0);
        total += v;
        if (i < k()) kept += v;
    }
    if (total <= 0.0) return 1.0;
    return kept / total;
}

PCAModel pca_fit(const Matrix& x, std::size_t k) {
    const std::size_t n = x.rows();
    const std::size_t d = x.cols();
    if (n < 2) fail(errc::invalid_argument, "need at least 2 samples to fit a projection");
    if (k < 1 || k > d) {
        fail(errc::invalid_argument, "component count " + std::to_string(k) +
                                         " outside [1," + std::to_string(d) + "]");
    }

    PCAModel model;
    model.mean = Matrix(1, d);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) model.mean(0, j) += x(i, j);
    }
    for (std::size_t j = 0; j < d; ++j) model.mean(0, j) /= static_cast<double>(n);

    Matrix cov(d, d);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t a = 0; a < d; ++a) {
            const double da = x(i, a) - model.mean(0, a);
            for (std::size_t b = a; b < d; ++b) {
                cov(a, b) += da * (x(i, b) - model.mean(0, b));
            }
        }
    }
    for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = a; b < d; ++b) {
            cov(a, b) /= static_cast<double>(n);
            cov(b, a) = cov(a, b);
        }
    }

    SymEigenResult eig = sym_eigen(cov);
    model.eigenvalues = std::move(eig.values);
    model.components = Matrix(d, k);
    for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t j = 0; j < k; ++j) model.components(a, j) = eig.vectors(a, j);
    }
    return model;
}

Matrix pca_transform(const PCAModel& model, const Matrix& x) {
    if (x.cols() != model.dim()) {
        fail(errc::dimension_mismatch, "data width " + std::to_string(x.cols()) +
                                           " does not match fitted width " +
                                           std::to_string(model.dim()));
    }
    Matrix centered = x;
    for (std::size_t i = 0; i < centered.rows(); ++i) {
        for (std::size_t j = 0; j < centered.cols(); ++j) centered(i, j) -= model.mean(0, j);
    }
    return matmul(centered, model.components);
}

Matrix pca_inverse(const PCAModel& model, const Matrix& z) {
    if (z.cols() != model.k()) {
        fail(errc::dimension_mismatch, "projection width " + std::to_string(z.cols()) +
                                           " does not match component count " +
                                           std::to_string(model.k()));
    }
    Matrix back = matmul(z, model.components.transpose());
    for (std::size_t i = 0; i < back.rows(); ++i) {
        for (std::size_t j = 0; j < back.cols(); ++j) back(i, j) += model.mean(0, j);
    }
    return back;
}

double reconstruction_error(const Matrix& x, const Matrix& xhat) {
    if (x.rows() != xhat.rows() || x.cols() != xhat.cols()) {
        fail(errc::dimension_mismatch, "original and reconstruction shapes differ");
    }
    if (x.rows() == 0) fail(errc::invalid_argument, "no rows to compare");
    double sum = 0.0;
    for (std::size_t e = 0; e < x.size(); ++e) {
        const double diff = x.data()[e] - xhat.data()[e];
        sum += diff * diff;
    }
    return sum / static_cast<double>(x.rows());
}

Autoencoder make_autoencoder(std::size_t dim, std::size_t hidden, std::size_t latent,
                             Rng& rng) {
    if (dim < 1 || hidden < 1 || latent < 1) {
        fail(errc::invalid_argument, "autoencoder widths must be >= 1");
    }
    Autoencoder ae;
    ae.encoder.layers.push_back(make_affine(dim, hidden, rng));
    ae.encoder.layers.push_back(make_leaky_relu(0.01));
    ae.encoder.layers.push_back(make_affine(hidden, latent, rng));
    ae.decoder.layers.push_back(make_affine(latent, hidden, rng));
    ae.decoder.layers.push_back(make_leaky_relu(0.01));
    ae.decoder.layers.push_back(make_affine(hidden, dim, rng));
    return ae;
}

TrainingReport ae_train(Autoencoder& ae, const Matrix& x, const TrainConfig& config) {
    Network joint;
    joint.layers.reserve(ae.encoder.layers.size() + ae.decoder.layers.size());
    for (const auto& l : ae.encoder.layers) joint.layers.push_back(l);
    for (const auto& l : ae.decoder.layers) joint.layers.push_back(l);
    const std::size_t cut = ae.encoder.layers.size();

    TrainingReport report = train_regression(joint, x, x, config);

    for (std::size_t i = 0; i < cut; ++i) ae.encoder.layers[i] = std::move(joint.layers[i]);
    for (std::size_t i = cut; i < joint.layers.size(); ++i) {
        ae.decoder.layers[i - cut] = std::move(joint.layers[i]);
    }
    return report;
}

std::pair<Autoencoder, double> ae_train(const Matrix& x, std::size_t latent,
                                        const TrainConfig& config) {
    if (x.rows() == 0 || x.cols() == 0) {
        fail(errc::invalid_argument, "cannot train an autoencoder on empty data");
    }
    const std::size_t hidden = std::max<std::size_t>(2 * latent, 8);
    Rng rng(config.seed);
    Autoencoder ae = make_autoencoder(x.cols(), hidden, latent, rng);
    TrainingReport report = ae_train(ae, x, config);
    double final_loss = report.epoch_loss.empty() ? 0.0 : report.epoch_loss.back();
    return {std::move(ae), final_loss};
}

Matrix ae_encode(const Autoencoder& ae, const Matrix& x) { return forward(ae.encoder, x); }

Matrix ae_decode(const Autoencoder& ae, const Matrix& z) { return forward(ae.decoder, z); }

} // namespace geonet
