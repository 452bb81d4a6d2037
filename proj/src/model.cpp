#include "eivid/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "eivid/identifiability.hpp"

namespace eivid {

Dataset::Dataset(int horizon_in, SelectionOperator input_obs_in, SelectionOperator output_obs_in,
                 Vec u_obs_in, Vec y_obs_in)
    : horizon(horizon_in),
      input_obs(std::move(input_obs_in)),
      output_obs(std::move(output_obs_in)),
      u_obs(std::move(u_obs_in)),
      y_obs(std::move(y_obs_in)) {
    if (horizon < 0) throw std::invalid_argument("dataset: negative horizon");
    if (input_obs.ambient_dim != horizon || output_obs.ambient_dim != horizon) {
        throw std::invalid_argument("dataset: selection operators must have ambient_dim = N");
    }
    if (static_cast<int>(u_obs.size()) != input_obs.count() ||
        static_cast<int>(y_obs.size()) != output_obs.count()) {
        throw std::invalid_argument("dataset: value vector lengths must match index sets");
    }
}

Dataset dataset_from_records(const std::vector<Record>& records, int horizon) {
    std::set<int> seen;
    std::vector<Record> sorted = records;
    std::sort(sorted.begin(), sorted.end(), [](const Record& a, const Record& b) { return a.t < b.t; });
    std::vector<int> tu, ty;
    Vec u, y;
    for (const Record& r : sorted) {
        if (r.t < 1 || r.t > horizon) {
            throw std::invalid_argument("dataset_from_records: time " + std::to_string(r.t) +
                                        " outside [1, " + std::to_string(horizon) + "]");
        }
        if (!seen.insert(r.t).second) {
            throw std::invalid_argument("dataset_from_records: duplicate time " +
                                        std::to_string(r.t));
        }
        if (r.u) {
            tu.push_back(r.t);
            u.push_back(*r.u);
        }
        if (r.y) {
            ty.push_back(r.t);
            y.push_back(*r.y);
        }
    }
    return Dataset(horizon, SelectionOperator(horizon, std::move(tu)),
                   SelectionOperator(horizon, std::move(ty)), std::move(u), std::move(y));
}

std::vector<Record> dataset_to_records(const Dataset& ds) {
    std::vector<Record> records(ds.horizon);
    for (int t = 1; t <= ds.horizon; ++t) records[t - 1].t = t;
    for (std::size_t k = 0; k < ds.input_obs.times.size(); ++k) {
        records[ds.input_obs.times[k] - 1].u = ds.u_obs[k];
    }
    for (std::size_t k = 0; k < ds.output_obs.times.size(); ++k) {
        records[ds.output_obs.times[k] - 1].y = ds.y_obs[k];
    }
    return records;
}

NoiseModel NoiseModel::from_sigma_y2(double sigma_y2, double gamma) {
    NoiseModel nm;
    nm.gamma = gamma;
    nm.sigma_y2 = sigma_y2;
    nm.sigma_u2 = sigma_y2 / gamma;
    nm.validate();
    return nm;
}

void NoiseModel::validate() const {
    if (!(gamma > 0.0)) throw std::invalid_argument("noise: gamma must be positive");
    if (!(sigma_y2 > 0.0) || !(sigma_u2 > 0.0)) {
        throw std::invalid_argument("noise: variances must be positive");
    }
    if (std::abs(sigma_u2 * gamma - sigma_y2) > 1e-12 * std::max(1.0, sigma_y2)) {
        throw std::invalid_argument("noise: sigma_u2 * gamma must equal sigma_y2");
    }
}

std::vector<std::string> validate(const Dataset& ds, int n) {
    std::vector<std::string> warnings;
    if (ds.n_y() == 0) {
        warnings.push_back("no output samples: the posterior reduces to the prior");
    }
    if (ds.n_u() == 0) {
        warnings.push_back("no input samples: the input estimate is driven by outputs alone");
    }
    if (n > ds.horizon) {
        warnings.push_back("more impulse-response taps than time steps (n > N)");
    }
    if (n >= 1) {
        const IdentifiabilityReport rep = check_structural(ds, n);
        if (!rep.structural_ok) {
            std::string msg = "structurally non-identifiable: missing input times not visible in "
                              "any available output:";
            for (int t : rep.offending_times) msg += " " + std::to_string(t);
            warnings.push_back(msg);
        }
    }
    return warnings;
}

}  // namespace eivid
