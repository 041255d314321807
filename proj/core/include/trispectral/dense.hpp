#pragma once

#include <span>
#include <vector>

namespace trispectral {

/// Minimal row-major dense matrix used for least-squares solves of
/// rectangular (tau-augmented and stacked) systems.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, 0.0) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    double& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }
    double* row(int i) { return a_.data() + static_cast<size_t>(i) * cols_; }
    const double* row(int i) const { return a_.data() + static_cast<size_t>(i) * cols_; }

    std::vector<double> matvec(std::span<const double> x) const;

private:
    int rows_ = 0, cols_ = 0;
    std::vector<double> a_;
};

struct LeastSquaresResult {
    std::vector<double> x;
    double residual_norm = 0.0;  // ||Ax - b||_2 of the solved system
};

/// Minimizer of ||Ax - b||_2 by blocked Householder QR (A is consumed).
/// Requires rows >= cols and full column rank; throws std::runtime_error
/// when a diagonal of R is negligible (rank deficiency).
LeastSquaresResult least_squares_solve(DenseMatrix a, std::vector<double> b);

/// Dense LU solve with partial pivoting (square systems; test oracle and
/// small dense solves).
std::vector<double> dense_lu_solve(DenseMatrix a, std::vector<double> b);

}  // namespace trispectral
