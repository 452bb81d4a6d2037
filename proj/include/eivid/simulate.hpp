#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "eivid/em.hpp"
#include "eivid/model.hpp"

// Surrogate benchmark generator: random stable discrete-time systems with
// unit noise-free output variance, noisy complete datasets, random missing
// masks, and the Monte Carlo scenario harness. Everything is deterministic
// in the seeds; sub-seeds are derived per (level, run) so concurrent
// execution cannot change results.

namespace eivid {

struct SystemConfig {
    int min_order = 5;
    int max_order = 30;
    double min_pole_radius = 0.3;
    double max_pole_radius = 0.95;
    double tail_tol = 1e-6;  // truncation: tail norm <= tail_tol * total norm
};

struct SyntheticSystem {
    Vec g_true;  // truncated impulse response, unit output variance under white input
    int order = 0;
    std::uint64_t seed = 0;
    double spectral_radius = 0.0;
};

// Modal construction: random stable poles (real and conjugate pairs) with
// random residues, impulse response truncated once the tail is negligible
// and scaled so the noise-free output variance under unit-variance white
// input is 1.
SyntheticSystem random_system(std::uint64_t seed, const SystemConfig& cfg = {});

struct SyntheticData {
    Dataset dataset;  // complete observations of u and y
    Vec w_true;       // noiseless input
    Vec v_true;       // noiseless output
};

SyntheticData generate_data(const SyntheticSystem& sys, int horizon, double sigma_u2,
                            double sigma_y2, std::uint64_t seed);

// Removes floor(frac * N) uniformly random distinct times per channel,
// independently; deterministic in the seed.
Dataset apply_missing(const Dataset& ds, double frac_u, double frac_y, std::uint64_t seed);

enum class Scenario { A1, A2, A3, B };

Scenario scenario_from_string(const std::string& name);
const char* scenario_name(Scenario s);
// The condition grid of the experiment: missing fractions for A1-A3,
// input-noise variances for B.
std::vector<double> default_levels(Scenario s);

struct ScenarioSpec {
    Scenario scenario = Scenario::A1;
    std::vector<double> levels;  // empty selects default_levels(scenario)
    int runs = 50;
    int horizon = 210;
    int n = 100;
    std::uint64_t seed = 1;
    double sigma_y2 = 0.1;
    double sigma_u2 = 0.1;  // scenario A input noise; scenario B takes it from the level
    SolverConfig solver;    // solver.n is overwritten with `n`

    std::vector<double> effective_levels() const;
    void validate() const;
};

struct ScenarioRow {
    double level = 0.0;
    int runs = 0;
    double median_fit_g = 0.0;
    double median_fit_w = 0.0;
    double median_fit_v = 0.0;
    double median_fit_g_naive = 0.0;  // NaN outside scenario B
    int non_identifiable = 0;
};

// Runs the full Monte Carlo grid; identifiability failures are counted and
// excluded from the medians. jobs <= 0 selects the hardware concurrency.
std::vector<ScenarioRow> run_scenario(const ScenarioSpec& spec, int jobs = 0);

// splitmix-style mixer used to derive independent sub-seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace eivid
