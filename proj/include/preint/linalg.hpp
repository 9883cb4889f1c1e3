#pragma once

#include <cstddef>
#include <vector>

namespace preint {

/// Dense row-major matrix, just enough for covariance factorizations.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const noexcept {
        return data_[i * cols_ + j];
    }

    const double* row(std::size_t i) const noexcept { return data_.data() + i * cols_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// A * A^T.
Matrix multiply_transpose(const Matrix& a);

double frobenius_norm(const Matrix& a);

/// Frobenius norm of a - b. Shapes must agree.
double frobenius_distance(const Matrix& a, const Matrix& b);

struct EigenDecomposition {
    std::vector<double> values;  ///< decreasing
    Matrix vectors;              ///< column j belongs to values[j]
};

/// Cyclic Jacobi for a symmetric matrix. Sweeps until the off-diagonal
/// norm is below 1e-14 of the total; throws FactorizationError after
/// `max_sweeps`.
EigenDecomposition symmetric_eigen(const Matrix& s, int max_sweeps = 100);

}  // namespace preint
