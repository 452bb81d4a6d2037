#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "eivid/kernel.hpp"
#include "eivid/linops.hpp"
#include "eivid/model.hpp"
#include "eivid/posterior.hpp"

// Marginal-likelihood solver: expectation step (posterior moments plus the
// second-moment matrix of the masked convolution operator), closed-form
// maximization steps for the input estimate, kernel scale and noise
// variances, a scalar search for the kernel decay, and the outer iteration.

namespace eivid {

struct SolverConfig {
    int n = 1;                      // impulse-response taps to estimate
    double tol_rel = 0.01;          // stop when the combined relative change drops below this
    int max_iter = 200;
    int beta_grid = 100;            // coarse log-spaced grid points for the decay search
    int beta_refine = 30;           // golden-section refinement iterations
    bool estimate_noise = true;     // update sigma_y2 (and sigma_u2 through gamma) each iteration
    bool fixed_input_mode = false;  // freeze w; reduces to output-only kernel regression
    double lambda0 = 10.0;
    double beta0 = 0.6;
    // Initial output-noise variance; NaN selects the ridge-residual estimate.
    double sigma_y2_init = std::nan("");

    void validate() const;
};

struct EStepQuantities {
    PosteriorMoments moments;  // m, P at the current parameters
    ToeplitzMatrix M;          // N x N Toeplitz matrix of the zero-padded posterior mean
    Matrix A;                  // N x N posterior second moment of Gᵀ P_yᵀ P_y G
};

EStepQuantities estep(const EMState& state, const Dataset& ds, const SolverConfig& cfg);

// The second-moment matrix sum_{k,l} (P + m mᵀ)_{k,l} S^{k-1} D_y (Sᵀ)^{l-1},
// accumulated along the diagonals of P + m mᵀ (equivalent to the Kronecker
// form Rᵀ[(P + m mᵀ) ⊗ P_yᵀ P_y] R with Rᵀ = [S⁰ ... S^{n-1}]).
Matrix output_second_moment(const Vec& mean, const Matrix& cov, const Vec& mask_y);

// w⁺ = (A + gamma P_uᵀP_u)^{-1} (Mᵀ P_yᵀ ỹ + gamma P_uᵀ ũ). Throws
// IdentifiabilityError when the system is singular (missing-data pattern not
// identifiable).
Vec update_w(const EStepQuantities& eq, const Dataset& ds, const NoiseModel& noise);

// lambda*(beta) = trace(K_beta^{-1} (P + m mᵀ)) / n.
double lambda_star(double beta, const PosteriorMoments& moments);

// Minimizes f(beta) = n log lambda*(beta) + log det K_beta over the clamped
// domain: coarse grid scan then golden-section refinement in the best
// bracket. When `incumbent` is a valid beta it competes with the search
// result, so the returned pair never scores worse than the current iterate.
// Returns (beta, lambda*(beta)).
std::pair<double, double> update_beta(const PosteriorMoments& moments, const SolverConfig& cfg,
                                      double incumbent = std::nan(""));

// Joint residual update of the noise variances under the known ratio gamma.
NoiseModel update_noise(const Vec& w_next, const EStepQuantities& eq, const Dataset& ds,
                        double gamma);

SolveResult run_em(const Dataset& ds, double gamma, const SolverConfig& cfg,
                   const EMState* init = nullptr);

// v = T_{N x n}(w) g.
Vec smooth_output(const Vec& w, const Vec& g);

// Output-only kernel regression baseline: the input measurements are taken
// at face value (requires a fully observed input) and only lambda, beta,
// sigma_y2 are estimated.
SolveResult naive_identify(const Dataset& ds, const SolverConfig& cfg);

// Linear interpolation of the observed input over missing times (endpoints
// held at the nearest observed value); the default w initialization.
Vec interpolate_input(const Dataset& ds);

}  // namespace eivid
