#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

namespace moment_bounds {

/// Small dense row-major matrix. Sized for the <= 8x8 problems of the moment
/// machinery; not meant for anything large.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0) : rows_(rows), cols_(cols), a_(rows * cols, fill) {}
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    std::span<const double> data() const noexcept { return a_; }

    Matrix& operator+=(const Matrix& o);
    Matrix& operator-=(const Matrix& o);
    Matrix& operator*=(double s);

    double max_abs() const noexcept;
    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> a_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(double s, Matrix a);
Matrix operator*(const Matrix& a, const Matrix& b);
std::vector<double> operator*(const Matrix& a, std::span<const double> x);
Matrix transpose(const Matrix& a);

struct SymmetricEigen {
    std::vector<double> values; ///< ascending
    Matrix vectors;             ///< column k pairs with values[k]
};

/// Cyclic Jacobi rotations. Rejects input whose skew part exceeds
/// 1e-12 * max|M|.
SymmetricEigen symmetric_eigen(const Matrix& m);

struct EigenPair {
    double value = 0;
    std::vector<double> vector;
};

/// Smallest eigenvalue with a unit eigenvector.
EigenPair min_eig(const Matrix& m);
double max_eigenvalue(const Matrix& m);

/// Lower-triangular L with L L' = m, or nullopt if m is not numerically
/// positive definite.
std::optional<Matrix> cholesky(const Matrix& m);

/// Solves L L' x = b given the Cholesky factor.
std::vector<double> cholesky_solve(const Matrix& l, std::span<const double> b);

/// L^{-1} for lower-triangular L.
Matrix lower_inverse(const Matrix& l);

} // namespace moment_bounds
