#pragma once

#include <set>
#include <vector>

#include "eivid/linalg.hpp"

// Identifiability checks for missing-data patterns: the combinatorial
// visibility condition and the numeric condition test on the information
// matrix (1/sy2) Gᵀ P_yᵀ P_y G + (1/su2) P_uᵀ P_u.
//
// The structural check asks for a matching of missing input times to
// DISTINCT available output times through nonzero taps (tap k+1 reaches
// output time tau_u + k). Per-sample visibility alone is not enough: two
// missing inputs seen only through one shared output alias each other and
// the information matrix is singular even though each sample is "visible".
// With every tap nonzero, matchability coincides with generic invertibility
// of the information matrix, which is what the rank check measures.

namespace eivid {

struct Dataset;
struct NoiseModel;

struct IdentifiabilityReport {
    bool structural_ok = true;
    bool rank_ok = true;
    std::vector<int> offending_times;  // missing input times violating the condition
    double condition_estimate = 0.0;   // of the information matrix; +inf when singular
};

inline constexpr double kConditionLimit = 1e12;

// Structural check with an explicit lag-support set (0-based lags: tap k+1
// acts at lag k under the Toeplitz convention).
IdentifiabilityReport check_structural(const Dataset& ds, const std::set<int>& lag_support);
// Same with all n taps assumed nonzero, i.e. support {0, ..., n-1}.
IdentifiabilityReport check_structural(const Dataset& ds, int n);

// Numeric check against the given impulse response (true or estimated).
IdentifiabilityReport check_rank(const Vec& g, const Dataset& ds, const NoiseModel& noise);

}  // namespace eivid
