#include <cmath>
#include <cstdio>
#include <iostream>
#include <set>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "eivid/io.hpp"

// Exit status contract: 0 success, 1 identifiability failure, 2 input/parse
// error, 3 numerical failure.

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIdentifiability = 1;
constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

eivid::Vec read_impulse_response_file(const std::string& path) {
    const nlohmann::json doc = nlohmann::json::parse(eivid::io::read_text_file(path), nullptr, false);
    if (doc.is_array()) return doc.get<eivid::Vec>();
    if (doc.is_object() && doc.contains("g_hat")) return doc.at("g_hat").get<eivid::Vec>();
    throw eivid::ParseError("impulse-response file must be a JSON array or an object with g_hat",
                            0);
}

void print_warnings(const eivid::Dataset& ds, int n) {
    for (const std::string& w : eivid::validate(ds, n)) {
        std::cerr << "warning: " << w << "\n";
    }
}

nlohmann::json identifiability_error_json(const eivid::IdentifiabilityError& err) {
    nlohmann::json doc;
    doc["error"] = "identifiability";
    doc["message"] = err.what();
    doc["report"]["structural_ok"] = err.offending_times.empty();
    doc["report"]["rank_ok"] = false;
    doc["report"]["offending_times"] = err.offending_times;
    doc["report"]["null_space_dim"] = err.null_space_dim;
    return doc;
}

int run_estimation(const std::string& data_path, const std::string& config_path,
                   const std::string& out_path, bool smooth_mode) {
    const eivid::io::RunConfig cfg = eivid::io::read_run_config(config_path);
    const eivid::Dataset ds = eivid::io::read_dataset_csv(data_path);
    print_warnings(ds, cfg.solver.n);
    try {
        const eivid::SolveResult res = eivid::run_em(ds, cfg.gamma, cfg.solver);
        eivid::io::write_text_file(out_path, smooth_mode
                                                 ? eivid::io::smooth_result_json(res, ds)
                                                 : eivid::io::identify_result_json(res));
        std::cout << (res.converged ? "converged" : "stopped at max_iter") << " after "
                  << res.iterations << " iterations; lambda=" << res.final_state.hyper.lambda
                  << " beta=" << res.final_state.hyper.beta
                  << " sigma_y2=" << res.final_state.noise.sigma_y2 << "\n";
    } catch (const eivid::IdentifiabilityError& err) {
        eivid::io::write_text_file(out_path, identifiability_error_json(err).dump(2) + "\n");
        std::cerr << "error: " << err.what() << "\n";
        return kExitIdentifiability;
    }
    return kExitOk;
}

int run_check(const std::string& data_path, int n, const std::string& g_path, double gamma) {
    const eivid::Dataset ds = eivid::io::read_dataset_csv(data_path);
    eivid::IdentifiabilityReport rep;
    bool rank_checked = false;
    if (!g_path.empty()) {
        const eivid::Vec g = read_impulse_response_file(g_path);
        std::set<int> support;
        for (std::size_t k = 0; k < g.size(); ++k) {
            if (g[k] != 0.0) support.insert(static_cast<int>(k));
        }
        rep = eivid::check_structural(ds, support);
        const eivid::NoiseModel noise = eivid::NoiseModel::from_sigma_y2(1.0, gamma);
        const eivid::IdentifiabilityReport rank = eivid::check_rank(g, ds, noise);
        rep.rank_ok = rank.rank_ok;
        rep.condition_estimate = rank.condition_estimate;
        rank_checked = true;
    } else {
        rep = eivid::check_structural(ds, n);
    }
    std::cout << eivid::io::report_json(rep, true, rank_checked);
    const bool ok = rep.structural_ok && (!rank_checked || rep.rank_ok);
    return ok ? kExitOk : kExitIdentifiability;
}

int run_benchmark(const std::string& spec_path, const std::string& out_path,
                  std::string summary_path, int jobs) {
    const eivid::ScenarioSpec spec = eivid::io::read_scenario_spec(spec_path);
    const std::vector<eivid::ScenarioRow> rows = eivid::run_scenario(spec, jobs);
    eivid::io::write_text_file(out_path, eivid::io::benchmark_csv(spec, rows));
    if (summary_path.empty()) summary_path = out_path + ".summary.json";
    eivid::io::write_text_file(summary_path, eivid::io::benchmark_summary_json(spec, rows));
    std::cout << "wrote " << rows.size() << " level rows to " << out_path << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Impulse-response identification and input/output smoothing for linear systems "
                 "from noisy measurements with missing samples"};
    app.require_subcommand(1);

    std::string data_path, config_path, out_path, g_path, spec_path, summary_path;
    int n_taps = 0;
    double gamma = 1.0;
    int jobs = 0;

    CLI::App* identify = app.add_subcommand(
        "identify", "Estimate the impulse response from a t,u,y CSV dataset");
    identify->add_option("--data", data_path, "dataset CSV (header t,u,y)")->required();
    identify->add_option("--config", config_path, "JSON config (gamma and n required)")->required();
    identify->add_option("--out", out_path, "result JSON path")->required();

    CLI::App* smooth = app.add_subcommand(
        "smooth", "Reconstruct the noiseless input and output trajectories");
    smooth->add_option("--data", data_path, "dataset CSV (header t,u,y)")->required();
    smooth->add_option("--config", config_path, "JSON config (gamma and n required)")->required();
    smooth->add_option("--out", out_path, "result JSON path")->required();

    CLI::App* check = app.add_subcommand(
        "check", "Check identifiability of the missing-data pattern");
    check->add_option("--data", data_path, "dataset CSV (header t,u,y)")->required();
    CLI::Option* opt_n = check->add_option("--n", n_taps, "tap count (all taps assumed nonzero)");
    CLI::Option* opt_g =
        check->add_option("--g", g_path, "impulse-response JSON (array or object with g_hat)");
    opt_n->excludes(opt_g);
    opt_g->excludes(opt_n);
    check->add_option("--gamma", gamma, "noise-variance ratio for the rank test (default 1)");

    CLI::App* benchmark = app.add_subcommand(
        "benchmark", "Run a Monte Carlo scenario and write the fit table as CSV");
    benchmark->add_option("--spec", spec_path, "scenario spec JSON")->required();
    benchmark->add_option("--out", out_path, "output CSV path")->required();
    benchmark->add_option("--summary", summary_path, "summary JSON path (default <out>.summary.json)");
    benchmark->add_option("--jobs", jobs, "worker threads (default: hardware concurrency)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitInput;
    }

    try {
        if (identify->parsed()) return run_estimation(data_path, config_path, out_path, false);
        if (smooth->parsed()) return run_estimation(data_path, config_path, out_path, true);
        if (check->parsed()) {
            if (n_taps <= 0 && g_path.empty()) {
                std::cerr << "error: check requires --n or --g\n";
                return kExitInput;
            }
            return run_check(data_path, n_taps, g_path, gamma);
        }
        if (benchmark->parsed()) return run_benchmark(spec_path, out_path, summary_path, jobs);
    } catch (const eivid::ParseError& e) {
        if (e.line > 0) {
            std::cerr << "error: line " << e.line << ": " << e.what() << "\n";
        } else {
            std::cerr << "error: " << e.what() << "\n";
        }
        return kExitInput;
    } catch (const eivid::IdentifiabilityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIdentifiability;
    } catch (const eivid::NumericalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitOk;
}
