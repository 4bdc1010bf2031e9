#include "geonet/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace geonet {

namespace {

constexpr int kMaxSweeps = 100;
constexpr double kOffDiagTol = 1e-10;

double off_diagonal_norm(const Matrix& a) {
    double s = 0.0;
    const std::size_t n = a.rows();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) s += a(i, j) * a(i, j);
    return std::sqrt(2.0 * s);
}

} // namespace

SymEigenResult sym_eigen(const Matrix& c) {
    const std::size_t n = c.rows();
    if (n == 0 || c.cols() != n)
        fail(errc::dimension_mismatch,
             "sym_eigen: matrix must be square and non-empty, got (" + std::to_string(c.rows()) +
                 "x" + std::to_string(c.cols()) + ")");

    const double sym_tol = 1e-9 * std::max(1.0, c.max_abs());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(c(i, j) - c(j, i)) > sym_tol)
                fail(errc::not_symmetric, "sym_eigen: |a(" + std::to_string(i) + "," +
                                              std::to_string(j) + ") - a(j,i)| = " +
                                              std::to_string(std::abs(c(i, j) - c(j, i))));

    Matrix a = c;
    // Eigenvectors accumulated row-wise (v[i] = i-th eigenvector) for contiguous updates.
    Matrix v = Matrix::identity(n);

    const double target = kOffDiagTol * std::max(c.frobenius_norm(), 1e-300);
    double off = off_diagonal_norm(a);

    int sweep = 0;
    while (off > target) {
        if (sweep++ >= kMaxSweeps)
            fail(errc::no_convergence, "sym_eigen: " + std::to_string(kMaxSweeps) +
                                           " sweeps exhausted, off-diagonal residual " +
                                           std::to_string(off));
        // Skip rotations on entries already far below the sweep threshold.
        const double skip_tol = target / (n * n + 1.0);
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::abs(apq) <= skip_tol) continue;

                const double app = a(p, p);
                const double aqq = a(q, q);
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double cs = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * cs;

                double* rp = a.row(p);
                double* rq = a.row(q);
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = rp[k];
                    const double akq = rq[k];
                    rp[k] = cs * akp - sn * akq;
                    rq[k] = sn * akp + cs * akq;
                }
                // Mirror the rotated rows back into the columns to keep a symmetric.
                for (std::size_t k = 0; k < n; ++k) {
                    a(k, p) = rp[k];
                    a(k, q) = rq[k];
                }
                a(p, p) = cs * cs * app - 2.0 * sn * cs * apq + sn * sn * aqq;
                a(q, q) = sn * sn * app + 2.0 * sn * cs * apq + cs * cs * aqq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;

                double* vp = v.row(p);
                double* vq = v.row(q);
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = vp[k];
                    const double vkq = vq[k];
                    vp[k] = cs * vkp - sn * vkq;
                    vq[k] = sn * vkp + cs * vkq;
                }
            }
        }
        off = off_diagonal_norm(a);
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

    SymEigenResult result;
    result.values.resize(n);
    result.vectors = Matrix(n, n);
    for (std::size_t col = 0; col < n; ++col) {
        const std::size_t src = order[col];
        result.values[col] = a(src, src);
        // Sign convention: largest-magnitude entry positive.
        const double* vec = v.row(src);
        std::size_t arg = 0;
        for (std::size_t k = 1; k < n; ++k)
            if (std::abs(vec[k]) > std::abs(vec[arg])) arg = k;
        const double s = vec[arg] < 0.0 ? -1.0 : 1.0;
        for (std::size_t k = 0; k < n; ++k) result.vectors(k, col) = s * vec[k];
    }
    return result;
}

} // namespace geonet
