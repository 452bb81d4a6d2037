#pragma once

#include "eivid/kernel.hpp"
#include "eivid/linalg.hpp"
#include "eivid/model.hpp"

// Gaussian posterior of the impulse response given the available outputs,
// and the marginal log-likelihood of the available data.

namespace eivid {

struct PosteriorMoments {
    Vec mean;    // length n
    Matrix cov;  // n x n, symmetric positive definite
};

// Information-form posterior
//   P = (Wᵀ P_yᵀ P_y W / sigma_y2 + (lambda K_beta)^{-1})^{-1}
//   m = P Wᵀ P_yᵀ ỹ / sigma_y2
// with W = T_{N x n}(w). The n x n system is solved by Cholesky and P is
// symmetrized afterwards. With no output samples this is exactly the prior.
PosteriorMoments posterior_moments(const Vec& w, const Hyperparameters& hyper, double sigma_y2,
                                   const Dataset& ds, int n);

// log N(ỹ; 0, Σ_ỹ) + log N(ũ; P_u w, sigma_u2 I), the two channels being
// independent. Σ_ỹ = lambda P_y W K_beta Wᵀ P_yᵀ + sigma_y2 I is evaluated
// through the same n x n information matrix (matrix determinant lemma +
// Woodbury), never densely.
double marginal_loglik(const EMState& state, const Dataset& ds, int n);

struct LoglikTerms {
    double output = 0.0;  // log N(ỹ; 0, Σ_ỹ)
    double input = 0.0;   // log N(ũ; P_u w, sigma_u2 I)
};
LoglikTerms marginal_loglik_terms(const EMState& state, const Dataset& ds, int n);

namespace detail {

// Wᵀ P_yᵀ P_y W and Wᵀ P_yᵀ ỹ, accumulated over the observed output rows of
// the Toeplitz matrix W (each row is a contiguous window of w reversed).
struct OutputGram {
    Matrix gram;  // n x n
    Vec rhs;      // length n
};
OutputGram output_gram(const Vec& w, const Dataset& ds, int n);

}  // namespace detail

}  // namespace eivid
