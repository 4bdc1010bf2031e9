#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "geonet/error.hpp"

namespace geonet {

/// Dense row-major matrix of doubles. The numeric substrate for everything else.
class Matrix {
public:
    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    double* data() noexcept { return data_.data(); }
    const double* data() const noexcept { return data_.data(); }

    double* row(std::size_t i) noexcept { return data_.data() + i * cols_; }
    const double* row(std::size_t i) const noexcept { return data_.data() + i * cols_; }

    Matrix transpose() const;

    bool all_finite() const noexcept;

    /// max |a_ij| over all entries
    double max_abs() const noexcept;

    /// Frobenius norm
    double frobenius_norm() const noexcept;

    bool operator==(const Matrix& other) const noexcept {
        return rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Standard matrix product. Rejects mismatched inner dimensions with a shape report.
Matrix matmul(const Matrix& a, const Matrix& b);

/// a + b and a - b, elementwise; shapes must match.
Matrix add(const Matrix& a, const Matrix& b);
Matrix sub(const Matrix& a, const Matrix& b);

/// Elementwise scale.
Matrix scale(const Matrix& a, double s);

/// Elementwise integer power x^d, d >= 0.
Matrix elementwise_pow(const Matrix& a, unsigned degree);

/// x^d for integer d by repeated multiplication.
double ipow(double x, unsigned degree) noexcept;

/// Column sums as a 1 x cols matrix.
Matrix col_sums(const Matrix& a);

} // namespace geonet
