#include "eivid/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>

#include "eivid/metrics.hpp"

namespace eivid {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// mt19937_64 is fully specified by the standard; the distributions below are
// hand-rolled so every byte of a benchmark run reproduces across standard
// libraries, not just across reruns.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() {  // [0, 1)
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    std::uint64_t below(std::uint64_t n) {  // unbiased integer in [0, n)
        const std::uint64_t limit = n * (std::numeric_limits<std::uint64_t>::max() / n);
        std::uint64_t v = engine_();
        while (v >= limit) v = engine_();
        return v % n;
    }

    double normal() {  // Box-Muller, pairs cached
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * 3.141592653589793238462643383279502884 * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

struct Mode {
    bool complex_pair = false;
    double radius = 0.0;
    double angle = 0.0;      // complex pairs only
    double amplitude = 0.0;  // residue magnitude (real: signed residue)
    double phase = 0.0;      // complex pairs only
};

double mode_value(const Mode& m, int k) {  // tap k >= 1
    const double decay = std::pow(m.radius, k - 1);
    if (m.complex_pair) return 2.0 * m.amplitude * decay * std::cos((k - 1) * m.angle + m.phase);
    return m.amplitude * decay;
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

SyntheticSystem random_system(std::uint64_t seed, const SystemConfig& cfg) {
    if (cfg.min_order < 1 || cfg.max_order < cfg.min_order) {
        throw std::invalid_argument("random_system: bad order range");
    }
    Rng rng(seed);
    for (int attempt = 0;; ++attempt) {
        const int order =
            cfg.min_order + static_cast<int>(rng.below(cfg.max_order - cfg.min_order + 1));
        std::vector<Mode> modes;
        int remaining = order;
        double radius = 0.0;
        while (remaining > 0) {
            Mode m;
            m.radius = rng.uniform(cfg.min_pole_radius, cfg.max_pole_radius);
            radius = std::max(radius, m.radius);
            if (remaining >= 2 && rng.uniform() < 0.5) {
                m.complex_pair = true;
                m.angle = rng.uniform(0.05, 3.141592653589793 - 0.05);
                m.amplitude = rng.normal();
                m.phase = rng.uniform(0.0, 2.0 * 3.141592653589793);
                remaining -= 2;
            } else {
                m.amplitude = rng.normal();
                if (rng.uniform() < 0.3) m.radius = -m.radius;  // some negative real poles
                remaining -= 1;
            }
            modes.push_back(m);
        }

        // Long enough that the slowest admissible pole has fully decayed.
        const int max_len = 2048;
        Vec g(max_len);
        for (int k = 1; k <= max_len; ++k) {
            double acc = 0.0;
            for (const Mode& m : modes) acc += mode_value(m, k);
            g[k - 1] = acc;
        }
        double total_sq = 0.0;
        for (double v : g) total_sq += v * v;
        if (!(total_sq > 0.0) || !std::isfinite(total_sq)) continue;  // degenerate draw, resample

        // Truncate where the tail becomes negligible.
        double tail_sq = 0.0;
        int keep = max_len;
        const double tail_limit = cfg.tail_tol * cfg.tail_tol * total_sq;
        for (int k = max_len; k >= 1; --k) {
            tail_sq += g[k - 1] * g[k - 1];
            if (tail_sq > tail_limit) {
                keep = k;
                break;
            }
        }
        g.resize(std::max(keep, 1));

        // Unit noise-free output variance under unit white input: sum g_k^2 = 1.
        const double scale = 1.0 / std::sqrt(total_sq);
        for (double& v : g) v *= scale;

        SyntheticSystem sys;
        sys.g_true = std::move(g);
        sys.order = order;
        sys.seed = seed;
        sys.spectral_radius = std::abs(radius);
        return sys;
    }
}

SyntheticData generate_data(const SyntheticSystem& sys, int horizon, double sigma_u2,
                            double sigma_y2, std::uint64_t seed) {
    if (horizon < 1) throw std::invalid_argument("generate_data: horizon must be >= 1");
    if (sigma_u2 < 0.0 || sigma_y2 < 0.0) {
        throw std::invalid_argument("generate_data: variances must be nonnegative");
    }
    Rng rng(seed);
    Vec w(horizon);
    for (double& v : w) v = rng.normal();

    Vec g = sys.g_true;
    if (static_cast<int>(g.size()) > horizon) g.resize(horizon);
    Vec v = smooth_output(w, g);

    const double su = std::sqrt(sigma_u2), sy = std::sqrt(sigma_y2);
    Vec u(horizon), y(horizon);
    for (int t = 0; t < horizon; ++t) u[t] = w[t] + su * rng.normal();
    for (int t = 0; t < horizon; ++t) y[t] = v[t] + sy * rng.normal();

    Dataset ds(horizon, SelectionOperator::full(horizon), SelectionOperator::full(horizon),
               std::move(u), std::move(y));
    return SyntheticData{std::move(ds), std::move(w), std::move(v)};
}

namespace {

SelectionOperator drop_random(const SelectionOperator& obs, int n_drop, Rng& rng) {
    std::vector<int> times = obs.times;
    // Fisher-Yates partial shuffle: move n_drop victims to the back.
    const int n = static_cast<int>(times.size());
    for (int k = 0; k < n_drop && k < n; ++k) {
        const int j = n - 1 - k;
        const int i = static_cast<int>(rng.below(j + 1));
        std::swap(times[i], times[j]);
    }
    times.resize(n - std::min(n_drop, n));
    std::sort(times.begin(), times.end());
    return SelectionOperator(obs.ambient_dim, std::move(times));
}

}  // namespace

Dataset apply_missing(const Dataset& ds, double frac_u, double frac_y, std::uint64_t seed) {
    if (frac_u < 0.0 || frac_u > 0.9 || frac_y < 0.0 || frac_y > 0.9) {
        throw std::invalid_argument("apply_missing: fractions must lie in [0, 0.9]");
    }
    Rng rng(seed);
    const int drop_u = static_cast<int>(frac_u * ds.horizon);
    const int drop_y = static_cast<int>(frac_y * ds.horizon);
    const Vec u_full = ds.input_obs.scatter(ds.u_obs);
    const Vec y_full = ds.output_obs.scatter(ds.y_obs);
    SelectionOperator new_u = drop_random(ds.input_obs, drop_u, rng);
    SelectionOperator new_y = drop_random(ds.output_obs, drop_y, rng);
    Vec u_obs = new_u.select(u_full);
    Vec y_obs = new_y.select(y_full);
    return Dataset(ds.horizon, std::move(new_u), std::move(new_y), std::move(u_obs),
                   std::move(y_obs));
}

Scenario scenario_from_string(const std::string& name) {
    if (name == "A1") return Scenario::A1;
    if (name == "A2") return Scenario::A2;
    if (name == "A3") return Scenario::A3;
    if (name == "B") return Scenario::B;
    throw std::invalid_argument("unknown scenario '" + name + "' (expected A1, A2, A3 or B)");
}

const char* scenario_name(Scenario s) {
    switch (s) {
        case Scenario::A1: return "A1";
        case Scenario::A2: return "A2";
        case Scenario::A3: return "A3";
        case Scenario::B: return "B";
    }
    return "?";
}

std::vector<double> default_levels(Scenario s) {
    switch (s) {
        case Scenario::A1:
        case Scenario::A2: return {0.0, 0.1, 0.2, 0.3, 0.4, 0.5};
        case Scenario::A3: return {0.0, 0.05, 0.10, 0.15, 0.20, 0.25};
        case Scenario::B: return {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
    }
    return {};
}

std::vector<double> ScenarioSpec::effective_levels() const {
    return levels.empty() ? default_levels(scenario) : levels;
}

void ScenarioSpec::validate() const {
    if (runs < 1) throw std::invalid_argument("scenario: runs must be >= 1");
    if (horizon < 1 || n < 1) throw std::invalid_argument("scenario: bad sizes");
    if (!(sigma_y2 > 0.0)) throw std::invalid_argument("scenario: sigma_y2 must be positive");
    if (sigma_u2 < 0.0) throw std::invalid_argument("scenario: sigma_u2 must be >= 0");
    const double hi = scenario == Scenario::B ? 1.0 : (scenario == Scenario::A3 ? 0.25 : 0.5);
    for (double lv : effective_levels()) {
        if (lv < 0.0 || lv > hi) {
            throw std::invalid_argument("scenario: level outside the experiment range [0, " +
                                        std::to_string(hi) + "]");
        }
    }
}

namespace {

struct RunOutcome {
    enum class Status { ok, non_identifiable, numerical } status = Status::ok;
    double fit_g = kNan, fit_w = kNan, fit_v = kNan, fit_g_naive = kNan;
};

RunOutcome execute_run(const ScenarioSpec& spec, double level, std::uint64_t run_seed) {
    const std::uint64_t sys_seed = mix_seed(run_seed, 1);
    const std::uint64_t data_seed = mix_seed(run_seed, 2);
    const std::uint64_t mask_seed = mix_seed(run_seed, 3);

    const SyntheticSystem sys = random_system(sys_seed);
    const double sigma_u2 = spec.scenario == Scenario::B ? level : spec.sigma_u2;
    const double gamma = sigma_u2 > 0.0 ? spec.sigma_y2 / sigma_u2 : 1e18;  // run_em clamps

    SyntheticData data = generate_data(sys, spec.horizon, sigma_u2, spec.sigma_y2, data_seed);
    Dataset ds = data.dataset;
    switch (spec.scenario) {
        case Scenario::A1: ds = apply_missing(ds, level, 0.0, mask_seed); break;
        case Scenario::A2: ds = apply_missing(ds, 0.0, level, mask_seed); break;
        case Scenario::A3: ds = apply_missing(ds, level, level, mask_seed); break;
        case Scenario::B: break;
    }

    SolverConfig cfg = spec.solver;
    cfg.n = spec.n;

    const Vec g_ref = zero_pad(sys.g_true, spec.n);
    RunOutcome out;
    try {
        const SolveResult res = run_em(ds, gamma, cfg);
        out.fit_g = fit(res.g_hat, g_ref);
        out.fit_w = fit(res.w_hat, data.w_true);
        out.fit_v = fit(res.v_hat, data.v_true);
    } catch (const IdentifiabilityError&) {
        out.status = RunOutcome::Status::non_identifiable;
        return out;
    } catch (const NumericalError&) {
        out.status = RunOutcome::Status::numerical;
        return out;
    }
    if (spec.scenario == Scenario::B) {
        try {
            const SolveResult naive = naive_identify(ds, cfg);
            out.fit_g_naive = fit(naive.g_hat, g_ref);
        } catch (const NumericalError&) {
            // keep the proposed-estimator fits; the naive column stays NaN
        }
    }
    return out;
}

}  // namespace

std::vector<ScenarioRow> run_scenario(const ScenarioSpec& spec, int jobs) {
    spec.validate();
    const std::vector<double> levels = spec.effective_levels();
    const int n_levels = static_cast<int>(levels.size());
    const int total = n_levels * spec.runs;
    std::vector<RunOutcome> outcomes(total);

    int workers = jobs > 0 ? jobs : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::clamp(workers, 1, total);

    std::atomic<int> next{0};
    auto work = [&]() {
        for (;;) {
            const int idx = next.fetch_add(1);
            if (idx >= total) return;
            const int li = idx / spec.runs;
            const int ri = idx % spec.runs;
            const std::uint64_t run_seed = mix_seed(mix_seed(spec.seed, li), 1000003ULL + ri);
            outcomes[idx] = execute_run(spec, levels[li], run_seed);
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int i = 0; i < workers; ++i) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    std::vector<ScenarioRow> rows(n_levels);
    for (int li = 0; li < n_levels; ++li) {
        std::vector<double> fg, fw, fv, fgn;
        int failures = 0;
        for (int ri = 0; ri < spec.runs; ++ri) {
            const RunOutcome& o = outcomes[li * spec.runs + ri];
            if (o.status == RunOutcome::Status::non_identifiable) {
                ++failures;
                continue;
            }
            if (o.status == RunOutcome::Status::numerical) continue;
            fg.push_back(o.fit_g);
            fw.push_back(o.fit_w);
            fv.push_back(o.fit_v);
            if (std::isfinite(o.fit_g_naive)) fgn.push_back(o.fit_g_naive);
        }
        ScenarioRow& row = rows[li];
        row.level = levels[li];
        row.runs = spec.runs;
        row.non_identifiable = failures;
        row.median_fit_g = fg.empty() ? kNan : median(fg);
        row.median_fit_w = fw.empty() ? kNan : median(fw);
        row.median_fit_v = fv.empty() ? kNan : median(fv);
        row.median_fit_g_naive = fgn.empty() ? kNan : median(fgn);
    }
    return rows;
}

}  // namespace eivid
