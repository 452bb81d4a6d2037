#include "eivid/em.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

#include "eivid/identifiability.hpp"
#include "eivid/simd/simd.hpp"

namespace eivid {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kGammaMax = 1e9;
constexpr double kVarianceFloor = 1e-12;

double variance_floor(double gamma) { return kVarianceFloor * std::max(1.0, gamma); }

// P + m mᵀ
Matrix moment_matrix(const PosteriorMoments& moments) {
    const std::size_t n = moments.mean.size();
    Matrix c = moments.cov;
    for (std::size_t i = 0; i < n; ++i) {
        simd::axpy(moments.mean[i], moments.mean.data(), c.row(i), n);
    }
    return c;
}

struct BetaEval {
    double f = kInf;
    double lambda = 0.0;
};

BetaEval eval_beta_objective(const KernelFactor& kf, const Matrix& c) {
    const int n = kf.dim();
    const double trace = simd::dot(kf.inverse().data(), c.data(),
                                   static_cast<std::size_t>(n) * n);
    const double lambda = trace / n;
    if (!(lambda > 0.0) || !std::isfinite(lambda)) return {};
    const double f = n * std::log(lambda) + kf.logdet();
    if (!std::isfinite(f)) return {};
    return {f, lambda};
}

Vec beta_grid_points(int grid) {
    const double lo = std::log(kBetaMin), hi = std::log(kBetaMax);
    Vec betas(grid);
    for (int i = 0; i < grid; ++i) {
        betas[i] = std::exp(lo + (hi - lo) * i / (grid - 1));
    }
    return betas;
}

// Kernel factorizations over the fixed search grid, built once per solver
// run and reused every iteration.
struct BetaGridCache {
    Vec betas;
    std::vector<std::unique_ptr<KernelFactor>> factors;

    BetaGridCache(const SolverConfig& cfg, int n) : betas(beta_grid_points(cfg.beta_grid)) {
        factors.reserve(betas.size());
        for (double b : betas) factors.push_back(std::make_unique<KernelFactor>(b, n));
    }
};

std::pair<double, double> update_beta_impl(const PosteriorMoments& moments,
                                           const SolverConfig& cfg, const BetaGridCache* cache,
                                           double incumbent) {
    const int n = static_cast<int>(moments.mean.size());
    const Matrix c = moment_matrix(moments);

    double best_beta = std::nan(""), best_f = kInf, best_lambda = 0.0;
    auto consider = [&](double beta, const BetaEval& e) {
        if (e.f < best_f) {
            best_f = e.f;
            best_beta = beta;
            best_lambda = e.lambda;
        }
    };
    auto eval_at = [&](double beta) {
        try {
            return eval_beta_objective(KernelFactor(beta, n), c);
        } catch (const NumericalError&) {
            return BetaEval{};
        }
    };

    const Vec betas = cache ? cache->betas : beta_grid_points(cfg.beta_grid);
    int best_idx = 0;
    for (std::size_t i = 0; i < betas.size(); ++i) {
        const BetaEval e = cache ? eval_beta_objective(*cache->factors[i], c) : eval_at(betas[i]);
        if (e.f < best_f) best_idx = static_cast<int>(i);
        consider(betas[i], e);
    }

    // Golden-section refinement inside the bracket around the best grid point.
    double a = betas[std::max(0, best_idx - 1)];
    double b = betas[std::min<int>(static_cast<int>(betas.size()) - 1, best_idx + 1)];
    constexpr double kGolden = 0.6180339887498949;
    double x1 = b - kGolden * (b - a);
    double x2 = a + kGolden * (b - a);
    BetaEval f1 = eval_at(x1), f2 = eval_at(x2);
    consider(x1, f1);
    consider(x2, f2);
    for (int it = 0; it < cfg.beta_refine; ++it) {
        if (f1.f <= f2.f) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kGolden * (b - a);
            f1 = eval_at(x1);
            consider(x1, f1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kGolden * (b - a);
            f2 = eval_at(x2);
            consider(x2, f2);
        }
    }

    if (std::isfinite(incumbent)) {
        const double beta_inc = std::clamp(incumbent, kBetaMin, kBetaMax);
        consider(beta_inc, eval_at(beta_inc));
    }

    if (!std::isfinite(best_f)) {
        throw NumericalError("update_beta: objective non-finite over the whole search domain");
    }
    return {best_beta, best_lambda};
}

double output_residual_quadratic(const Vec& w, const EStepQuantities& eq, const Dataset& ds) {
    // ỹᵀỹ - 2 ỹᵀ P_y M w + wᵀ A w (the expected output residual).
    double acc = dot(ds.y_obs, ds.y_obs);
    if (ds.n_y() > 0) {
        const Vec mw = ds.output_obs.select(eq.M.apply(w));
        acc -= 2.0 * dot(ds.y_obs, mw);
    }
    acc += dot(w, matvec(eq.A, w));
    return acc;
}

double init_sigma_y2(const Dataset& ds, const Vec& w0, const SolverConfig& cfg) {
    if (ds.n_y() == 0) return 1.0;
    Hyperparameters h{cfg.lambda0, std::clamp(cfg.beta0, kBetaMin, kBetaMax)};
    const PosteriorMoments pm = posterior_moments(w0, h, 1.0, ds, cfg.n);
    const Vec fitted = ds.output_obs.select(smooth_output(w0, pm.mean));
    const Vec resid = ds.y_obs - fitted;
    double mean = 0.0;
    for (double r : resid) mean += r;
    mean /= resid.size();
    double var = 0.0;
    for (double r : resid) var += (r - mean) * (r - mean);
    return var / resid.size();
}

}  // namespace

void SolverConfig::validate() const {
    if (n < 1) throw std::invalid_argument("solver config: n must be >= 1");
    if (!(tol_rel > 0.0)) throw std::invalid_argument("solver config: tol_rel must be positive");
    if (max_iter < 1) throw std::invalid_argument("solver config: max_iter must be >= 1");
    if (beta_grid < 2) throw std::invalid_argument("solver config: beta_grid must be >= 2");
    if (beta_refine < 0) throw std::invalid_argument("solver config: beta_refine must be >= 0");
    if (!(lambda0 > 0.0)) throw std::invalid_argument("solver config: lambda0 must be positive");
    if (!(beta0 > 0.0) || !(beta0 < 1.0)) {
        throw std::invalid_argument("solver config: beta0 must lie in (0, 1)");
    }
}

EStepQuantities estep(const EMState& state, const Dataset& ds, const SolverConfig& cfg) {
    PosteriorMoments moments =
        posterior_moments(state.w, state.hyper, state.noise.sigma_y2, ds, cfg.n);
    Matrix a = output_second_moment(moments.mean, moments.cov, ds.output_obs.mask());
    ToeplitzMatrix m(zero_pad(moments.mean, ds.horizon), ds.horizon, ds.horizon);
    return EStepQuantities{std::move(moments), std::move(m), std::move(a)};
}

Matrix output_second_moment(const Vec& mean, const Matrix& cov, const Vec& mask_y) {
    const int n = static_cast<int>(mean.size());
    const int n_total = static_cast<int>(mask_y.size());
    if (static_cast<int>(cov.rows()) != n || static_cast<int>(cov.cols()) != n) {
        throw std::invalid_argument("output_second_moment: cov size mismatch");
    }
    Matrix c = cov;
    for (int i = 0; i < n; ++i) simd::axpy(mean[i], mean.data(), c.row(i), n);

    // A(i,j) = sum_t mask[t] c(t-i, t-j): accumulate along the diagonals of c,
    // each a contiguous dot against a window of the mask.
    Matrix a(n_total, n_total);
    Vec diag(n);
    for (int delta = 0; delta < n && delta < n_total; ++delta) {
        const int diag_len = n - delta;
        for (int s = 0; s < diag_len; ++s) diag[s] = c(s + delta, s);
        for (int j = delta; j < n_total; ++j) {
            const int i = j - delta;
            const int len = std::min(diag_len, n_total - j);
            const double val = simd::dot(diag.data(), mask_y.data() + j, len);
            a(i, j) = val;
            a(j, i) = val;
        }
    }
    return a;
}

Vec update_w(const EStepQuantities& eq, const Dataset& ds, const NoiseModel& noise) {
    const int n_total = ds.horizon;
    const double gamma = noise.gamma;
    Matrix lhs = eq.A;
    const Vec mask_u = ds.input_obs.mask();
    for (int t = 0; t < n_total; ++t) lhs(t, t) += gamma * mask_u[t];

    Vec rhs = eq.M.apply_transpose(ds.output_obs.scatter(ds.y_obs));
    for (std::size_t k = 0; k < ds.input_obs.times.size(); ++k) {
        rhs[ds.input_obs.times[k] - 1] += gamma * ds.u_obs[k];
    }

    CholeskyTry fac = try_cholesky(lhs, 1e-12);
    if (!fac.ok) {
        const SymEigen eig = sym_eigen(lhs);
        double max_abs = 0.0;
        for (double v : eig.values) max_abs = std::max(max_abs, std::abs(v));
        int null_dim = 0;
        for (double v : eig.values) {
            if (std::abs(v) <= 1e-12 * std::max(max_abs, 1e-300)) ++null_dim;
        }
        const int n = static_cast<int>(eq.moments.mean.size());
        throw IdentifiabilityError("update_w: singular system (missing-data pattern is not "
                                   "identifiable)",
                                   std::max(null_dim, 1), check_structural(ds, n).offending_times);
    }
    return fac.chol.solve(std::move(rhs));
}

double lambda_star(double beta, const PosteriorMoments& moments) {
    const int n = static_cast<int>(moments.mean.size());
    const KernelFactor kf(beta, n);
    const Matrix c = moment_matrix(moments);
    const double trace = simd::dot(kf.inverse().data(), c.data(), static_cast<std::size_t>(n) * n);
    const double value = trace / n;
    if (!(value > 0.0)) {
        throw NumericalError("lambda_star: degenerate posterior moments (zero trace)");
    }
    return value;
}

std::pair<double, double> update_beta(const PosteriorMoments& moments, const SolverConfig& cfg,
                                      double incumbent) {
    return update_beta_impl(moments, cfg, nullptr, incumbent);
}

NoiseModel update_noise(const Vec& w_next, const EStepQuantities& eq, const Dataset& ds,
                        double gamma) {
    if (ds.n_u() + ds.n_y() == 0) {
        throw std::invalid_argument("update_noise: no observations");
    }
    const double sy_part = output_residual_quadratic(w_next, eq, ds);
    double su_part = 0.0;
    if (ds.n_u() > 0) {
        const Vec resid = ds.u_obs - ds.input_obs.select(w_next);
        su_part = dot(resid, resid);
    }
    double sigma_y2 = (sy_part + gamma * su_part) / (ds.n_u() + ds.n_y());
    // One shared floor keeps sigma_u2 = sigma_y2 / gamma above the floor too,
    // so the known-ratio invariant survives flooring.
    sigma_y2 = std::max(sigma_y2, variance_floor(gamma));
    return NoiseModel{gamma, sigma_y2, sigma_y2 / gamma};
}

Vec interpolate_input(const Dataset& ds) {
    Vec w(ds.horizon, 0.0);
    const auto& times = ds.input_obs.times;
    if (times.empty()) return w;
    for (int t = 1; t <= times.front(); ++t) w[t - 1] = ds.u_obs.front();
    for (std::size_t k = 0; k + 1 < times.size(); ++k) {
        const int t0 = times[k], t1 = times[k + 1];
        const double v0 = ds.u_obs[k], v1 = ds.u_obs[k + 1];
        for (int t = t0; t <= t1; ++t) {
            w[t - 1] = v0 + (v1 - v0) * static_cast<double>(t - t0) / (t1 - t0);
        }
    }
    for (int t = times.back(); t <= ds.horizon; ++t) w[t - 1] = ds.u_obs.back();
    return w;
}

SolveResult run_em(const Dataset& ds, double gamma, const SolverConfig& cfg,
                   const EMState* init) {
    cfg.validate();
    if (!(gamma > 0.0)) throw std::invalid_argument("run_em: gamma must be positive");
    if (ds.horizon < 1) throw std::invalid_argument("run_em: empty horizon");
    const double gamma_eff = std::min(gamma, kGammaMax);
    const int n = cfg.n;

    EMState state;
    if (init) {
        state = *init;
        if (static_cast<int>(state.w.size()) != ds.horizon) {
            throw std::invalid_argument("run_em: init w length != horizon");
        }
        state.hyper.validate();
        state.noise.validate();
        state.hyper.beta = std::clamp(state.hyper.beta, kBetaMin, kBetaMax);
        state.loglik_history.clear();
    } else {
        state.w = interpolate_input(ds);
        state.hyper = Hyperparameters{cfg.lambda0, std::clamp(cfg.beta0, kBetaMin, kBetaMax)};
        double sigma_y2 = std::isfinite(cfg.sigma_y2_init) ? cfg.sigma_y2_init
                                                           : init_sigma_y2(ds, state.w, cfg);
        sigma_y2 = std::max(sigma_y2, variance_floor(gamma_eff));
        state.noise = NoiseModel{gamma_eff, sigma_y2, sigma_y2 / gamma_eff};
    }
    state.iteration = 0;

    const bool fixed = cfg.fixed_input_mode;
    auto objective = [&](const EMState& s) {
        const LoglikTerms t = marginal_loglik_terms(s, ds, n);
        return fixed ? t.output : t.output + t.input;
    };

    const BetaGridCache grid(cfg, n);

    double loglik = objective(state);
    if (!std::isfinite(loglik)) {
        throw NumericalError("run_em: non-finite initial log-likelihood", -1.0, 0);
    }
    state.loglik_history.push_back(loglik);

    bool converged = false;
    int iter = 0;
    while (iter < cfg.max_iter) {
        ++iter;
        const EStepQuantities eq = estep(state, ds, cfg);
        Vec w_next = fixed ? state.w : update_w(eq, ds, state.noise);
        const auto [beta_next, lambda_next] =
            update_beta_impl(eq.moments, cfg, &grid, state.hyper.beta);
        NoiseModel noise_next = state.noise;
        if (cfg.estimate_noise) {
            if (fixed) {
                if (ds.n_y() > 0) {
                    double sigma_y2 = output_residual_quadratic(w_next, eq, ds) / ds.n_y();
                    sigma_y2 = std::max(sigma_y2, variance_floor(gamma_eff));
                    noise_next = NoiseModel{gamma_eff, sigma_y2, sigma_y2 / gamma_eff};
                }
            } else {
                noise_next = update_noise(w_next, eq, ds, gamma_eff);
            }
        }

        const double rel_change = std::max(
            {norm2(w_next - state.w) / (1.0 + norm2(state.w)),
             std::abs(lambda_next - state.hyper.lambda) / (1.0 + state.hyper.lambda),
             std::abs(beta_next - state.hyper.beta) / (1.0 + state.hyper.beta),
             std::abs(noise_next.sigma_y2 - state.noise.sigma_y2) / (1.0 + state.noise.sigma_y2)});

        state.w = std::move(w_next);
        state.hyper = Hyperparameters{lambda_next, beta_next};
        state.noise = noise_next;
        state.iteration = iter;

        loglik = objective(state);
        if (!std::isfinite(loglik)) {
            throw NumericalError("run_em: non-finite log-likelihood", -1.0, iter);
        }
        if (loglik < state.loglik_history.back() - 1e-8) {
            throw NumericalError("run_em: marginal log-likelihood decreased by " +
                                     std::to_string(state.loglik_history.back() - loglik),
                                 -1.0, iter);
        }
        state.loglik_history.push_back(loglik);

        if (rel_change < cfg.tol_rel) {
            converged = true;
            break;
        }
    }

    const PosteriorMoments final_moments =
        posterior_moments(state.w, state.hyper, state.noise.sigma_y2, ds, n);
    SolveResult result;
    result.g_hat = final_moments.mean;
    result.posterior_cov = final_moments.cov;
    result.w_hat = state.w;
    result.v_hat = smooth_output(result.w_hat, result.g_hat);
    result.converged = converged;
    result.iterations = iter;
    result.final_state = std::move(state);
    return result;
}

Vec smooth_output(const Vec& w, const Vec& g) {
    if (g.empty()) return Vec(w.size(), 0.0);
    return ToeplitzMatrix(w, static_cast<int>(w.size()), static_cast<int>(g.size())).apply(g);
}

SolveResult naive_identify(const Dataset& ds, const SolverConfig& cfg) {
    if (ds.n_u() != ds.horizon) {
        throw std::invalid_argument(
            "naive_identify: the baseline is defined only for a fully observed input");
    }
    SolverConfig fixed_cfg = cfg;
    fixed_cfg.fixed_input_mode = true;
    return run_em(ds, 1.0, fixed_cfg, nullptr);
}

}  // namespace eivid
