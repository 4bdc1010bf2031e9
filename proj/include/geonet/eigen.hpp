#pragma once

#include <vector>

#include "geonet/matrix.hpp"

namespace geonet {

struct SymEigenResult {
    std::vector<double> values; // descending
    Matrix vectors;             // orthonormal, one eigenvector per column, aligned with values
};

/// Symmetric eigendecomposition by cyclic Jacobi rotations.
/// Input must be square and symmetric within 1e-9 (relative to its largest entry).
/// Stops when the off-diagonal Frobenius norm drops below 1e-10 of the input norm,
/// capped at 100 sweeps; throws no_convergence with the residual otherwise.
/// Each eigenvector is sign-normalized so its largest-magnitude entry is positive.
SymEigenResult sym_eigen(const Matrix& c);

} // namespace geonet
