#include "eivid/identifiability.hpp"

#include <cmath>
#include <limits>

#include "eivid/linops.hpp"
#include "eivid/model.hpp"

namespace eivid {

namespace {

// Kuhn's augmenting-path search: can `missing_idx` be matched (or re-matched)
// given the current assignment of output times to missing inputs?
bool try_assign(int missing_idx, const std::vector<std::vector<int>>& reachable,
                std::vector<bool>& visited, std::vector<int>& owner) {
    for (int y : reachable[missing_idx]) {
        if (visited[y]) continue;
        visited[y] = true;
        if (owner[y] < 0 || try_assign(owner[y], reachable, visited, owner)) {
            owner[y] = missing_idx;
            return true;
        }
    }
    return false;
}

}  // namespace

IdentifiabilityReport check_structural(const Dataset& ds, const std::set<int>& lag_support) {
    IdentifiabilityReport rep;
    const Vec mask_u = ds.input_obs.mask();
    const Vec mask_y = ds.output_obs.mask();

    std::vector<int> missing_times;
    for (int tau = 1; tau <= ds.horizon; ++tau) {
        if (mask_u[tau - 1] == 0.0) missing_times.push_back(tau);
    }
    std::vector<std::vector<int>> reachable(missing_times.size());
    for (std::size_t i = 0; i < missing_times.size(); ++i) {
        for (int k : lag_support) {
            const int ty = missing_times[i] + k;
            if (ty >= 1 && ty <= ds.horizon && mask_y[ty - 1] != 0.0) {
                reachable[i].push_back(ty - 1);
            }
        }
    }
    // Maximum matching of missing inputs to distinct output times.
    std::vector<int> owner(ds.horizon, -1);
    for (std::size_t i = 0; i < missing_times.size(); ++i) {
        std::vector<bool> visited(ds.horizon, false);
        if (!try_assign(static_cast<int>(i), reachable, visited, owner)) {
            rep.offending_times.push_back(missing_times[i]);
        }
    }
    rep.structural_ok = rep.offending_times.empty();
    rep.rank_ok = rep.structural_ok;
    return rep;
}

IdentifiabilityReport check_structural(const Dataset& ds, int n) {
    std::set<int> support;
    for (int k = 0; k < n; ++k) support.insert(k);
    return check_structural(ds, support);
}

IdentifiabilityReport check_rank(const Vec& g, const Dataset& ds, const NoiseModel& noise) {
    IdentifiabilityReport rep;
    const int n_total = ds.horizon;
    // Gᵀ D_y G with G = T(zero_pad(g, N)): entries sum_t d_t g_{t-i+1} g_{t-j+1}.
    const ToeplitzMatrix big_g(zero_pad(g, n_total), n_total, n_total);
    const Matrix gd = big_g.dense();
    const Vec mask_y = ds.output_obs.mask();
    const Vec mask_u = ds.input_obs.mask();
    Matrix info(n_total, n_total);
    const double wy = 1.0 / noise.sigma_y2;
    const double wu = 1.0 / noise.sigma_u2;
    for (int i = 0; i < n_total; ++i) {
        for (int j = i; j < n_total; ++j) {
            double acc = 0.0;
            for (int t = 0; t < n_total; ++t) {
                if (mask_y[t] != 0.0) acc += gd(t, i) * gd(t, j);
            }
            info(i, j) = wy * acc;
            info(j, i) = info(i, j);
        }
        info(i, i) += wu * mask_u[i];
    }
    rep.condition_estimate = sym_condition(info);
    rep.rank_ok = std::isfinite(rep.condition_estimate) && rep.condition_estimate < kConditionLimit;
    rep.structural_ok = rep.rank_ok;
    return rep;
}

}  // namespace eivid
