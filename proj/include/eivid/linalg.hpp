#pragma once

#include <cstddef>
#include <vector>

#include "eivid/errors.hpp"

// Small dense linear algebra on row-major storage. Problem sizes here are a
// few hundred at most, so everything is unblocked; the inner loops run on
// the simd kernel layer.

namespace eivid {

using Vec = std::vector<double>;

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

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    double* row(std::size_t i) { return data_.data() + i * cols_; }
    const double* row(std::size_t i) const { return data_.data() + i * cols_; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> data_;
};

Matrix matmul(const Matrix& a, const Matrix& b);
Vec matvec(const Matrix& a, const Vec& x);
// aᵀ x without materializing the transpose.
Vec matvec_transposed(const Matrix& a, const Vec& x);
Matrix transpose(const Matrix& a);
// a := (a + aᵀ)/2
void symmetrize(Matrix& a);

double dot(const Vec& a, const Vec& b);
double norm2(const Vec& a);
// Frobenius norm.
double norm_fro(const Matrix& a);
Vec operator+(const Vec& a, const Vec& b);
Vec operator-(const Vec& a, const Vec& b);
Vec operator*(double s, Vec a);

struct CholeskyTry;

// Lower-triangular Cholesky factorization of a symmetric positive definite
// matrix. factor() throws NumericalError on a non-positive pivot;
// try_cholesky() reports failure (with the pivot index) instead, treating
// any pivot <= rel_pivot_tol * max initial diagonal as singular.
class Cholesky {
public:
    static Cholesky factor(const Matrix& a);

    const Matrix& lower() const { return l_; }
    double logdet() const;
    // Solves A x = b.
    Vec solve(Vec b) const;
    // Solves A X = B column-wise (B is n x m, row-major).
    Matrix solve(Matrix b) const;
    Matrix inverse() const { return solve(Matrix::identity(l_.rows())); }

private:
    friend CholeskyTry try_cholesky(const Matrix& a, double rel_pivot_tol);
    Matrix l_;
};

struct CholeskyTry {
    bool ok = false;
    Cholesky chol;       // valid when ok
    int bad_pivot = -1;  // first failing column when !ok
};
CholeskyTry try_cholesky(const Matrix& a, double rel_pivot_tol = 0.0);

// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
// Values are sorted ascending; vectors (when requested) are the matching
// columns of `vectors`.
struct SymEigen {
    Vec values;
    Matrix vectors;
};
SymEigen sym_eigen(Matrix a, bool want_vectors = false);

// max|eig| / min|eig| of a symmetric matrix; +inf when singular to machine
// precision.
double sym_condition(const Matrix& a);

}  // namespace eivid
