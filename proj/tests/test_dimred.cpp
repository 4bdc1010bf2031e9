#include <cmath>
#include <cstdio>
#include <vector>

#include "doctest.h"
#include "geonet/dimred.hpp"
#include "geonet/model_io.hpp"
#include "test_util.hpp"

using namespace geonet;

namespace {

Matrix uniform_matrix(std::size_t n, std::size_t d, Rng& rng) {
    Matrix x(n, d);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) x(i, j) = rng.uniform(-2.0, 2.0);
    return x;
}

// Column variances of z under the same 1/n convention the fit uses.
std::vector<double> column_variances(const Matrix& z) {
    std::vector<double> out(z.cols(), 0.0);
    for (std::size_t j = 0; j < z.cols(); ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < z.rows(); ++i) mean += z(i, j);
        mean /= static_cast<double>(z.rows());
        double var = 0.0;
        for (std::size_t i = 0; i < z.rows(); ++i) {
            const double c = z(i, j) - mean;
            var += c * c;
        }
        out[j] = var / static_cast<double>(z.rows());
    }
    return out;
}

} // namespace

TEST_CASE("a perfect line projects onto (1,1)/sqrt(2) with full variance captured") {
    Matrix x = Matrix::from_rows({{1, 1}, {2, 2}, {3, 3}, {-1, -1}});
    PCAModel m = pca_fit(x, 1);
    CHECK(m.dim() == 2);
    CHECK(m.k() == 1);
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(m.components(0, 0) == doctest::Approx(s).epsilon(1e-10));
    CHECK(m.components(1, 0) == doctest::Approx(s).epsilon(1e-10));
    CHECK(m.explained_variance_ratio() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(m.eigenvalues[1] == doctest::Approx(0.0).scale(1.0).epsilon(1e-10));

    // The mean row maps to the origin of the component space.
    Matrix mean_row = m.mean;
    Matrix z = pca_transform(m, mean_row);
    CHECK(std::abs(z(0, 0)) < 1e-12);
}

TEST_CASE("full-rank projection reconstructs the data and reaches ratio 1") {
    Rng rng(3);
    Matrix x = uniform_matrix(40, 5, rng);
    PCAModel m = pca_fit(x, 5);
    CHECK(m.explained_variance_ratio() == doctest::Approx(1.0).epsilon(1e-10));

    Matrix rec = pca_inverse(m, pca_transform(m, x));
    CHECK(testutil::max_abs_diff(rec, x) < 1e-8);
    CHECK(reconstruction_error(x, rec) < 1e-16);
}

TEST_CASE("component columns are orthonormal and eigenvalues descend") {
    Rng rng(5);
    Matrix x = uniform_matrix(60, 7, rng);
    PCAModel m = pca_fit(x, 4);

    Matrix gram = matmul(m.components.transpose(), m.components);
    CHECK(testutil::max_abs_diff(gram, Matrix::identity(4)) < 1e-8);

    REQUIRE(m.eigenvalues.size() == 7);
    for (std::size_t i = 0; i + 1 < 7; ++i) CHECK(m.eigenvalues[i] >= m.eigenvalues[i + 1]);
    for (double ev : m.eigenvalues) CHECK(ev >= -1e-10);
}

TEST_CASE("projected coordinates have variance equal to their eigenvalues") {
    Rng rng(7);
    Matrix x = uniform_matrix(200, 6, rng);
    PCAModel m = pca_fit(x, 6);
    Matrix z = pca_transform(m, x);
    auto vars = column_variances(z);
    for (std::size_t j = 0; j < 6; ++j) {
        CHECK(vars[j] ==
              doctest::Approx(m.eigenvalues[j]).epsilon(1e-6)); // relative comparison
    }
}

TEST_CASE("explained variance ratio is monotone in k") {
    Rng rng(9);
    Matrix x = uniform_matrix(80, 8, rng);
    double prev = 0.0;
    for (std::size_t k = 1; k <= 8; ++k) {
        const double evr = pca_fit(x, k).explained_variance_ratio();
        CHECK(evr >= prev - 1e-12);
        CHECK(evr <= 1.0 + 1e-12);
        prev = evr;
    }
    CHECK(prev == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("low-variance directions carry almost nothing after projection") {
    // Strongly anisotropic data: dominant direction plus faint noise.
    Rng rng(11);
    Matrix x(100, 4);
    for (std::size_t i = 0; i < 100; ++i) {
        const double t = rng.uniform(-3.0, 3.0);
        x(i, 0) = t;
        x(i, 1) = 0.5 * t + rng.gaussian(0.0, 0.01);
        x(i, 2) = rng.gaussian(0.0, 0.01);
        x(i, 3) = -t + rng.gaussian(0.0, 0.01);
    }
    PCAModel m = pca_fit(x, 1);
    CHECK(m.explained_variance_ratio() > 0.999);
    // Discarded spectrum is tiny relative to the lead eigenvalue.
    for (std::size_t i = 1; i < 4; ++i)
        CHECK(m.eigenvalues[i] < 1e-3 * m.eigenvalues[0]);
}

TEST_CASE("pca_fit validates its arguments") {
    Rng rng(13);
    Matrix x = uniform_matrix(10, 3, rng);
    CHECK_FAILS_WITH(invalid_argument, pca_fit(x, 0));
    CHECK_FAILS_WITH(invalid_argument, pca_fit(x, 4));
    CHECK_FAILS_WITH(invalid_argument, pca_fit(Matrix(1, 3), 1));
    CHECK_FAILS_WITH(invalid_argument, pca_fit(Matrix(0, 3), 1));

    PCAModel m = pca_fit(x, 2);
    CHECK_FAILS_WITH(dimension_mismatch, pca_transform(m, Matrix(5, 4)));
    CHECK_FAILS_WITH(dimension_mismatch, pca_inverse(m, Matrix(5, 3)));
}

TEST_CASE("projection files round-trip through save and load") {
    Rng rng(17);
    Matrix x = uniform_matrix(30, 4, rng);
    PCAModel m = pca_fit(x, 2);
    auto path = testutil::scratch_path("proj.json");
    save_pca(m, path);
    PCAModel loaded = load_pca(path);
    CHECK(loaded.mean == m.mean);
    CHECK(loaded.components == m.components);
    CHECK(loaded.eigenvalues == m.eigenvalues);
    CHECK(testutil::max_abs_diff(pca_transform(loaded, x), pca_transform(m, x)) == 0.0);
    std::remove(path.c_str());
}

TEST_CASE("reconstruction_error averages squared row distances") {
    Matrix a = Matrix::from_rows({{1, 2}, {3, 4}});
    Matrix b = Matrix::from_rows({{0, 2}, {3, 1}});
    // Row 0: 1^2, row 1: 3^2 -> mean (1 + 9) / 2 = 5.
    CHECK(reconstruction_error(a, b) == doctest::Approx(5.0));
    CHECK_FAILS_WITH(dimension_mismatch, reconstruction_error(a, Matrix(1, 2)));
}

TEST_CASE("autoencoder factory builds the symmetric bottleneck") {
    Rng rng(19);
    Autoencoder ae = make_autoencoder(6, 10, 3, rng);
    CHECK(ae.dim() == 6);
    CHECK(ae.latent_dim() == 3);
    ae.encoder.validate();
    ae.decoder.validate();
    CHECK(ae.decoder.input_dim() == 3);
    CHECK(ae.decoder.output_dim() == 6);

    Matrix x = uniform_matrix(4, 6, rng);
    Matrix z = ae_encode(ae, x);
    CHECK(z.rows() == 4);
    CHECK(z.cols() == 3);
    Matrix back = ae_decode(ae, z);
    CHECK(back.rows() == 4);
    CHECK(back.cols() == 6);

    CHECK_FAILS_WITH(invalid_argument, make_autoencoder(0, 10, 3, rng));
}

TEST_CASE("a latent space at least as wide as the input learns the identity") {
    Rng rng(21);
    Matrix x = uniform_matrix(10, 4, rng);

    Autoencoder ae = make_autoencoder(4, 16, 4, rng);
    const double before = reconstruction_error(x, ae_decode(ae, ae_encode(ae, x)));

    TrainConfig tc;
    tc.epochs = 2000; // one full batch per epoch -> exactly 2000 steps
    tc.batch_size = 32;
    tc.lr = 0.01;
    tc.seed = 4;
    TrainingReport report = ae_train(ae, x, tc);
    REQUIRE(report.epoch_loss.size() == 2000);
    CHECK(report.epoch_loss.back() < 1e-3);
    CHECK(report.epoch_loss.back() < before);
    CHECK(report.epoch_accuracy.empty()); // regression reports no accuracy

    const double after = reconstruction_error(x, ae_decode(ae, ae_encode(ae, x)));
    CHECK(after < 1e-3);
}

TEST_CASE("the convenience trainer builds, trains, and reports the final loss") {
    Rng rng(23);
    Matrix x = uniform_matrix(10, 3, rng);
    TrainConfig tc;
    tc.epochs = 1500;
    tc.batch_size = 32;
    tc.lr = 0.01;
    tc.seed = 8;
    auto [ae, final_loss] = ae_train(x, 3, tc);
    CHECK(ae.dim() == 3);
    CHECK(ae.latent_dim() == 3);
    CHECK(final_loss < 1e-3);
    CHECK(reconstruction_error(x, ae_decode(ae, ae_encode(ae, x))) ==
          doctest::Approx(final_loss).epsilon(0.5)); // same scale: both are mean MSE
}
