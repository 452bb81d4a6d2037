#include "eivid/kernel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace eivid {

namespace {

void check_beta(double beta) {
    if (!(beta > 0.0) || !(beta < 1.0)) {
        throw std::invalid_argument("kernel: beta must lie strictly inside (0, 1), got " +
                                    std::to_string(beta));
    }
}

}  // namespace

void Hyperparameters::validate() const {
    if (!(lambda > 0.0)) throw std::invalid_argument("hyperparameters: lambda must be positive");
    check_beta(beta);
}

Matrix kernel_matrix(double beta, int n) {
    check_beta(beta);
    if (n < 1) throw std::invalid_argument("kernel_matrix: n must be >= 1");
    // Powers along the first row/column then mirror: entry (i,j) = beta^(max+1)
    // in 0-based indices.
    Vec pow(n);
    double p = beta;
    for (int i = 0; i < n; ++i) {
        pow[i] = p;
        p *= beta;
    }
    Matrix k(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) k(i, j) = pow[std::max(i, j)];
    }
    return k;
}

double kernel_logdet(double beta, int n) {
    return KernelFactor(beta, n).logdet();
}

Matrix kernel_solve(double beta, const Matrix& b) {
    return KernelFactor(beta, static_cast<int>(b.rows())).solve(b);
}

KernelFactor::KernelFactor(double beta, int n) : beta_(beta), n_(n) {
    check_beta(beta);
    if (n < 1) throw std::invalid_argument("kernel: n must be >= 1");
    try {
        chol_ = Cholesky::factor(kernel_matrix(beta, n));
    } catch (const NumericalError&) {
        throw NumericalError("kernel: factorization failed at beta = " + std::to_string(beta) +
                             ", n = " + std::to_string(n));
    }
    logdet_ = chol_.logdet();
    inverse_ = chol_.inverse();
    symmetrize(inverse_);
}

}  // namespace eivid
