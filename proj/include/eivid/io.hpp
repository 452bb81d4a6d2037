#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "eivid/em.hpp"
#include "eivid/identifiability.hpp"
#include "eivid/model.hpp"
#include "eivid/simulate.hpp"

// File contracts of the command-line surface.
//
// Data CSV: header "t,u,y", one row per time 1..N in order, an empty cell is
// a missing sample. Config, result and report documents are JSON; every
// floating-point value is serialized with 17 significant digits so a
// round-trip reproduces the exact double.

namespace eivid::io {

std::string format_double(double v);

Dataset parse_dataset_csv(std::istream& in);
Dataset read_dataset_csv(const std::string& path);
void write_dataset_csv(const Dataset& ds, std::ostream& out);
void write_dataset_csv(const Dataset& ds, const std::string& path);

struct RunConfig {
    double gamma = 0.0;  // required in the file; never defaulted
    SolverConfig solver; // solver.n comes from the required "n" key
};

RunConfig parse_run_config(const std::string& text);
RunConfig read_run_config(const std::string& path);

// Result document for `identify`: estimates, hyperparameters, convergence
// information, the marginal log-likelihood trace and the raw posterior
// covariance.
std::string identify_result_json(const SolveResult& res);
// Result document for `smooth`: adds the per-time trajectories with columns
// marking which times were originally observed.
std::string smooth_result_json(const SolveResult& res, const Dataset& ds);

std::string report_json(const IdentifiabilityReport& rep, bool structural_checked,
                        bool rank_checked);

ScenarioSpec parse_scenario_spec(const std::string& text);
ScenarioSpec read_scenario_spec(const std::string& path);

// scenario,level,runs,median_fit_g,median_fit_w,median_fit_v,
// median_fit_g_naive,non_identifiable — the naive column is empty outside
// scenario B.
std::string benchmark_csv(const ScenarioSpec& spec, const std::vector<ScenarioRow>& rows);
std::string benchmark_summary_json(const ScenarioSpec& spec, const std::vector<ScenarioRow>& rows);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace eivid::io
