#include "eivid/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace eivid::io {

using nlohmann::json;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::string trim(const std::string& s) {
    const char* ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

double parse_number(const std::string& field, int lineno, const char* what) {
    const std::string s = trim(field);
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ParseError(std::string("cannot parse ") + what + " value '" + s + "'", lineno);
    }
}

}  // namespace

Dataset parse_dataset_csv(std::istream& in) {
    std::string line;
    int lineno = 0;
    if (!std::getline(in, line)) throw ParseError("empty file, expected header 't,u,y'", 1);
    ++lineno;
    if (trim(line) != "t,u,y") throw ParseError("expected header 't,u,y'", lineno);

    std::vector<Record> records;
    int expect_t = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != 3) {
            throw ParseError("expected 3 comma-separated fields (t,u,y), got " +
                                 std::to_string(fields.size()),
                             lineno);
        }
        const std::string t_str = trim(fields[0]);
        int t = 0;
        try {
            std::size_t pos = 0;
            t = std::stoi(t_str, &pos);
            if (pos != t_str.size()) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw ParseError("cannot parse time index '" + t_str + "'", lineno);
        }
        if (t != expect_t) {
            throw ParseError("time index " + std::to_string(t) + " out of order, expected " +
                                 std::to_string(expect_t) + " (rows must cover 1..N in order)",
                             lineno);
        }
        Record r;
        r.t = t;
        if (!trim(fields[1]).empty()) r.u = parse_number(fields[1], lineno, "input");
        if (!trim(fields[2]).empty()) r.y = parse_number(fields[2], lineno, "output");
        records.push_back(r);
        ++expect_t;
    }
    if (records.empty()) throw ParseError("no data rows", lineno + 1);
    return dataset_from_records(records, expect_t - 1);
}

Dataset read_dataset_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'", 0);
    return parse_dataset_csv(in);
}

void write_dataset_csv(const Dataset& ds, std::ostream& out) {
    out << "t,u,y\n";
    for (const Record& r : dataset_to_records(ds)) {
        out << r.t << ',';
        if (r.u) out << format_double(*r.u);
        out << ',';
        if (r.y) out << format_double(*r.y);
        out << '\n';
    }
}

void write_dataset_csv(const Dataset& ds, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    write_dataset_csv(ds, out);
}

namespace {

json parse_json_document(const std::string& text, const char* what) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw ParseError(std::string("malformed JSON in ") + what, 0);
    if (!doc.is_object()) throw ParseError(std::string(what) + " must be a JSON object", 0);
    return doc;
}

void apply_solver_keys(const json& doc, SolverConfig& solver) {
    if (doc.contains("tol_rel")) solver.tol_rel = doc.at("tol_rel").get<double>();
    if (doc.contains("max_iter")) solver.max_iter = doc.at("max_iter").get<int>();
    if (doc.contains("beta_grid")) solver.beta_grid = doc.at("beta_grid").get<int>();
    if (doc.contains("beta_refine")) solver.beta_refine = doc.at("beta_refine").get<int>();
    if (doc.contains("estimate_noise")) {
        solver.estimate_noise = doc.at("estimate_noise").get<bool>();
    }
    if (doc.contains("lambda0")) solver.lambda0 = doc.at("lambda0").get<double>();
    if (doc.contains("beta0")) solver.beta0 = doc.at("beta0").get<double>();
}

}  // namespace

RunConfig parse_run_config(const std::string& text) {
    const json doc = parse_json_document(text, "config");
    if (!doc.contains("gamma") || doc.at("gamma").is_null()) {
        throw ParseError("gamma required (the noise-variance ratio is never defaulted)", 0);
    }
    if (!doc.contains("n") || doc.at("n").is_null()) {
        throw ParseError("n required (number of impulse-response taps)", 0);
    }
    RunConfig cfg;
    cfg.gamma = doc.at("gamma").get<double>();
    cfg.solver.n = doc.at("n").get<int>();
    apply_solver_keys(doc, cfg.solver);
    if (doc.contains("fixed_input")) cfg.solver.fixed_input_mode = doc.at("fixed_input").get<bool>();
    if (doc.contains("sigma_y2") && !doc.at("sigma_y2").is_null()) {
        cfg.solver.sigma_y2_init = doc.at("sigma_y2").get<double>();
    }
    return cfg;
}

RunConfig read_run_config(const std::string& path) { return parse_run_config(read_text_file(path)); }

namespace {

json result_common_json(const SolveResult& res) {
    json doc;
    doc["g_hat"] = res.g_hat;
    doc["w_hat"] = res.w_hat;
    doc["v_hat"] = res.v_hat;
    doc["lambda"] = res.final_state.hyper.lambda;
    doc["beta"] = res.final_state.hyper.beta;
    doc["sigma_y2"] = res.final_state.noise.sigma_y2;
    doc["sigma_u2"] = res.final_state.noise.sigma_u2;
    doc["gamma"] = res.final_state.noise.gamma;
    doc["converged"] = res.converged;
    doc["iterations"] = res.iterations;
    doc["loglik_trace"] = res.final_state.loglik_history;
    return doc;
}

}  // namespace

std::string identify_result_json(const SolveResult& res) {
    json doc = result_common_json(res);
    const std::size_t n = res.posterior_cov.rows();
    json cov = json::array();
    for (std::size_t i = 0; i < n; ++i) {
        cov.push_back(std::vector<double>(res.posterior_cov.row(i), res.posterior_cov.row(i) + n));
    }
    doc["posterior_cov"] = std::move(cov);
    return doc.dump(2) + "\n";
}

std::string smooth_result_json(const SolveResult& res, const Dataset& ds) {
    json doc = result_common_json(res);
    std::vector<int> t(ds.horizon);
    for (int i = 0; i < ds.horizon; ++i) t[i] = i + 1;
    const Vec mu = ds.input_obs.mask();
    const Vec my = ds.output_obs.mask();
    std::vector<bool> u_observed(mu.begin(), mu.end()), y_observed(my.begin(), my.end());
    doc["t"] = t;
    doc["u_observed"] = u_observed;
    doc["y_observed"] = y_observed;
    return doc.dump(2) + "\n";
}

std::string report_json(const IdentifiabilityReport& rep, bool structural_checked,
                        bool rank_checked) {
    json doc;
    doc["structural_ok"] = structural_checked ? json(rep.structural_ok) : json();
    doc["rank_ok"] = rank_checked ? json(rep.rank_ok) : json();
    doc["offending_times"] = rep.offending_times;
    doc["condition_estimate"] = rank_checked && std::isfinite(rep.condition_estimate)
                                    ? json(rep.condition_estimate)
                                    : json();
    return doc.dump(2) + "\n";
}

ScenarioSpec parse_scenario_spec(const std::string& text) {
    const json doc = parse_json_document(text, "scenario spec");
    if (!doc.contains("scenario")) throw ParseError("scenario required (A1, A2, A3 or B)", 0);
    ScenarioSpec spec;
    spec.scenario = scenario_from_string(doc.at("scenario").get<std::string>());
    if (doc.contains("runs")) spec.runs = doc.at("runs").get<int>();
    if (doc.contains("N")) spec.horizon = doc.at("N").get<int>();
    if (doc.contains("n")) spec.n = doc.at("n").get<int>();
    if (doc.contains("seed")) spec.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("sigma_y2")) spec.sigma_y2 = doc.at("sigma_y2").get<double>();
    if (doc.contains("sigma_u2")) spec.sigma_u2 = doc.at("sigma_u2").get<double>();
    if (doc.contains("levels")) spec.levels = doc.at("levels").get<std::vector<double>>();
    apply_solver_keys(doc, spec.solver);
    spec.validate();
    return spec;
}

ScenarioSpec read_scenario_spec(const std::string& path) {
    return parse_scenario_spec(read_text_file(path));
}

std::string benchmark_csv(const ScenarioSpec& spec, const std::vector<ScenarioRow>& rows) {
    std::ostringstream out;
    out << "scenario,level,runs,median_fit_g,median_fit_w,median_fit_v,median_fit_g_naive,"
           "non_identifiable\n";
    const bool has_naive = spec.scenario == Scenario::B;
    for (const ScenarioRow& r : rows) {
        out << scenario_name(spec.scenario) << ',' << format_double(r.level) << ',' << r.runs
            << ',';
        if (std::isfinite(r.median_fit_g)) out << format_double(r.median_fit_g);
        out << ',';
        if (std::isfinite(r.median_fit_w)) out << format_double(r.median_fit_w);
        out << ',';
        if (std::isfinite(r.median_fit_v)) out << format_double(r.median_fit_v);
        out << ',';
        if (has_naive && std::isfinite(r.median_fit_g_naive)) {
            out << format_double(r.median_fit_g_naive);
        }
        out << ',' << r.non_identifiable << '\n';
    }
    return out.str();
}

std::string benchmark_summary_json(const ScenarioSpec& spec, const std::vector<ScenarioRow>& rows) {
    json doc;
    doc["scenario"] = scenario_name(spec.scenario);
    doc["runs"] = spec.runs;
    doc["N"] = spec.horizon;
    doc["n"] = spec.n;
    doc["seed"] = spec.seed;
    doc["sigma_y2"] = spec.sigma_y2;
    doc["sigma_u2"] = spec.sigma_u2;
    doc["levels"] = spec.effective_levels();
    int failures = 0;
    json table = json::array();
    for (const ScenarioRow& r : rows) {
        failures += r.non_identifiable;
        json row;
        row["level"] = r.level;
        row["runs"] = r.runs;
        row["median_fit_g"] = std::isfinite(r.median_fit_g) ? json(r.median_fit_g) : json();
        row["median_fit_w"] = std::isfinite(r.median_fit_w) ? json(r.median_fit_w) : json();
        row["median_fit_v"] = std::isfinite(r.median_fit_v) ? json(r.median_fit_v) : json();
        row["median_fit_g_naive"] =
            std::isfinite(r.median_fit_g_naive) ? json(r.median_fit_g_naive) : json();
        row["non_identifiable"] = r.non_identifiable;
        table.push_back(std::move(row));
    }
    doc["rows"] = std::move(table);
    doc["total_non_identifiable"] = failures;
    return doc.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << text;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'", 0);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace eivid::io
