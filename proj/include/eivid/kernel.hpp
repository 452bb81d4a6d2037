#pragma once

#include "eivid/linalg.hpp"

// First-order stable-spline kernel K_beta with entries beta^max(i,j)
// (1-based indices), its factorization, log-determinant and solves.

namespace eivid {

// Numerically usable range for the decay parameter; the open interval (0,1)
// degenerates at both ends.
inline constexpr double kBetaMin = 1e-3;
inline constexpr double kBetaMax = 1.0 - 1e-3;

struct Hyperparameters {
    double lambda = 1.0;  // kernel scale, > 0
    double beta = 0.5;    // decay, in (0, 1)

    void validate() const;
};

Matrix kernel_matrix(double beta, int n);
// log det K_beta; the scale-dependent part separates as
// log det(lambda K_beta) = n log lambda + kernel_logdet(beta, n).
double kernel_logdet(double beta, int n);
// X with K_beta X = B, by Cholesky; relative residual <= 1e-10 in exact
// SPD conditions. Throws NumericalError naming beta when the factorization
// breaks down.
Matrix kernel_solve(double beta, const Matrix& b);

// One factorization per beta, reused for solves, log-determinant and the
// explicit inverse (the inverse is the solve against the identity, computed
// up front so instances are immutable and safe to share across threads).
class KernelFactor {
public:
    KernelFactor(double beta, int n);

    double beta() const { return beta_; }
    int dim() const { return n_; }
    double logdet() const { return logdet_; }
    Vec solve(Vec b) const { return chol_.solve(std::move(b)); }
    Matrix solve(Matrix b) const { return chol_.solve(std::move(b)); }
    const Matrix& inverse() const { return inverse_; }

private:
    double beta_;
    int n_;
    Cholesky chol_;
    double logdet_;
    Matrix inverse_;
};

}  // namespace eivid
