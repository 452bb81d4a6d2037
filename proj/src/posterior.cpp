#include "eivid/posterior.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "eivid/simd/simd.hpp"

namespace eivid {

namespace detail {

OutputGram output_gram(const Vec& w, const Dataset& ds, int n) {
    const int n_total = ds.horizon;
    if (static_cast<int>(w.size()) != n_total) {
        throw std::invalid_argument("output_gram: w length != horizon");
    }
    Vec w_rev(w.rbegin(), w.rend());
    OutputGram out{Matrix(n, n), Vec(n, 0.0)};
    for (std::size_t i = 0; i < ds.output_obs.times.size(); ++i) {
        const int t = ds.output_obs.times[i] - 1;  // 0-based row of W
        const int len = std::min(n, t + 1);
        const double* row = w_rev.data() + (n_total - 1 - t);
        for (int k = 0; k < len; ++k) {
            simd::axpy(row[k], row + k, out.gram.row(k) + k, len - k);
        }
        simd::axpy(ds.y_obs[i], row, out.rhs.data(), len);
    }
    // Mirror the accumulated upper triangle.
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) out.gram(j, i) = out.gram(i, j);
    return out;
}

}  // namespace detail

PosteriorMoments posterior_moments(const Vec& w, const Hyperparameters& hyper, double sigma_y2,
                                   const Dataset& ds, int n) {
    hyper.validate();
    if (!(sigma_y2 > 0.0)) throw std::invalid_argument("posterior: sigma_y2 must be positive");
    if (n < 1) throw std::invalid_argument("posterior: n must be >= 1");

    if (ds.n_y() == 0) {
        // No data: posterior equals the prior.
        Matrix prior = kernel_matrix(hyper.beta, n);
        for (int i = 0; i < n; ++i) simd::scal(hyper.lambda, prior.row(i), n);
        return PosteriorMoments{Vec(n, 0.0), std::move(prior)};
    }

    const KernelFactor kf(hyper.beta, n);
    detail::OutputGram og = detail::output_gram(w, ds, n);
    Matrix info = std::move(og.gram);
    const double wy = 1.0 / sigma_y2;
    const Matrix& kinv = kf.inverse();
    const double prior_weight = 1.0 / hyper.lambda;
    for (int i = 0; i < n; ++i) {
        simd::scal(wy, info.row(i), n);
        simd::axpy(prior_weight, kinv.row(i), info.row(i), n);
    }

    CholeskyTry fac = try_cholesky(info);
    if (!fac.ok) {
        throw NumericalError("posterior: information matrix numerically singular",
                             sym_condition(info));
    }
    Matrix cov = fac.chol.solve(Matrix::identity(n));
    symmetrize(cov);
    Vec b = std::move(og.rhs);
    simd::scal(wy, b.data(), b.size());
    Vec mean = fac.chol.solve(std::move(b));
    return PosteriorMoments{std::move(mean), std::move(cov)};
}

LoglikTerms marginal_loglik_terms(const EMState& state, const Dataset& ds, int n) {
    state.hyper.validate();
    state.noise.validate();
    constexpr double log2pi = 1.8378770664093454836;  // log(2*pi)
    LoglikTerms terms;

    if (ds.n_y() > 0) {
        const KernelFactor kf(state.hyper.beta, n);
        detail::OutputGram og = detail::output_gram(state.w, ds, n);
        const double sy2 = state.noise.sigma_y2;
        Matrix info = std::move(og.gram);
        const Matrix& kinv = kf.inverse();
        for (int i = 0; i < n; ++i) {
            simd::scal(1.0 / sy2, info.row(i), n);
            simd::axpy(1.0 / state.hyper.lambda, kinv.row(i), info.row(i), n);
        }
        CholeskyTry fac = try_cholesky(info);
        if (!fac.ok) {
            throw NumericalError("marginal_loglik: output covariance not SPD",
                                 sym_condition(info));
        }
        // Matrix determinant lemma:
        //   log det Σ_ỹ = N_y log sy2 + log det(lambda K) + log det(info)
        const double logdet = ds.n_y() * std::log(sy2) +
                              (n * std::log(state.hyper.lambda) + kf.logdet()) +
                              fac.chol.logdet();
        // Woodbury: ỹᵀ Σ^{-1} ỹ = ỹᵀỹ/sy2 - bᵀ info^{-1} b, b = Wᵀ P_yᵀ ỹ / sy2.
        Vec b = std::move(og.rhs);
        simd::scal(1.0 / sy2, b.data(), b.size());
        const Vec sol = fac.chol.solve(b);
        const double quad = dot(ds.y_obs, ds.y_obs) / sy2 - dot(b, sol);
        terms.output = -0.5 * (ds.n_y() * log2pi + logdet + quad);
        if (!std::isfinite(terms.output)) {
            throw NumericalError("marginal_loglik: non-finite output term");
        }
    }

    if (ds.n_u() > 0) {
        const Vec resid = ds.u_obs - ds.input_obs.select(state.w);
        const double su2 = state.noise.sigma_u2;
        terms.input = -0.5 * (ds.n_u() * (log2pi + std::log(su2)) + dot(resid, resid) / su2);
        if (!std::isfinite(terms.input)) {
            throw NumericalError("marginal_loglik: non-finite input term");
        }
    }
    return terms;
}

double marginal_loglik(const EMState& state, const Dataset& ds, int n) {
    const LoglikTerms t = marginal_loglik_terms(state, ds, n);
    return t.output + t.input;
}

}  // namespace eivid
