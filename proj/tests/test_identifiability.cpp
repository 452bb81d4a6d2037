#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "eivid/identifiability.hpp"
#include "eivid/model.hpp"
#include "support/oracles.hpp"

using namespace eivid;

namespace {

Dataset mask_dataset(int n_total, const std::vector<int>& tu, const std::vector<int>& ty,
                     oracle::Rng& rng) {
    SelectionOperator su(n_total, tu), sy(n_total, ty);
    return Dataset(n_total, su, sy, rng.normal_vec(su.count()), rng.normal_vec(sy.count()));
}

std::vector<int> bits_to_times(unsigned bits, int n_total) {
    std::vector<int> times;
    for (int t = 1; t <= n_total; ++t) {
        if (bits & (1u << (t - 1))) times.push_back(t);
    }
    return times;
}

}  // namespace

TEST_CASE("structural visibility condition") {
    oracle::Rng rng(3);
    SUBCASE("missing input covered by a same-time output") {
        const Dataset ds = mask_dataset(4, {1, 3, 4}, {1, 2, 3, 4}, rng);
        const IdentifiabilityReport rep = check_structural(ds, 2);
        CHECK(rep.structural_ok);
        CHECK(rep.offending_times.empty());
    }
    SUBCASE("missing input after the last output is invisible") {
        const Dataset ds = mask_dataset(4, {1, 2, 3}, {1, 2, 3}, rng);
        const IdentifiabilityReport rep = check_structural(ds, 2);
        CHECK_FALSE(rep.structural_ok);
        CHECK(rep.offending_times == std::vector<int>{4});
    }
    SUBCASE("a sparse lag support can miss windows a dense one covers") {
        // input missing at 2; outputs at {3}: lag 1 reaches it, lag {0,2} do not
        const Dataset ds = mask_dataset(4, {1, 3, 4}, {3}, rng);
        CHECK(check_structural(ds, std::set<int>{1}).structural_ok);
        CHECK_FALSE(check_structural(ds, std::set<int>{0, 2}).structural_ok);
    }
}

TEST_CASE("rank condition") {
    oracle::Rng rng(5);
    const NoiseModel noise = NoiseModel::from_sigma_y2(1.0, 1.0);
    SUBCASE("full input observation always passes") {
        for (int trial = 0; trial < 10; ++trial) {
            const int n_total = rng.integer(2, 7);
            const Dataset ds = mask_dataset(
                n_total, SelectionOperator::full(n_total).times,
                rng.subset(n_total, rng.uniform(0.0, 1.0)), rng);
            const Vec g = rng.normal_vec(rng.integer(1, 3));
            CHECK(check_rank(g, ds, noise).rank_ok);
        }
    }
    SUBCASE("an all-zero response with any missing input fails") {
        const Dataset ds = mask_dataset(5, {1, 2, 4, 5}, {1, 2, 3, 4, 5}, rng);
        const IdentifiabilityReport rep = check_rank(Vec(3, 0.0), ds, noise);
        CHECK_FALSE(rep.rank_ok);
    }
}

TEST_CASE("structural and rank checks agree when all taps are nonzero") {
    // exhaustive over all input/output masks
    oracle::Rng rng(7);
    const NoiseModel noise = NoiseModel::from_sigma_y2(1.0, 1.0);
    for (int n_total = 1; n_total <= 6; ++n_total) {
        for (int taps = 1; taps <= std::min(3, n_total); ++taps) {
            Vec g(taps);
            for (double& x : g) {
                x = rng.uniform(0.4, 1.5) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
            }
            for (unsigned bu = 0; bu < (1u << n_total); ++bu) {
                for (unsigned by = 0; by < (1u << n_total); ++by) {
                    const Dataset ds = mask_dataset(n_total, bits_to_times(bu, n_total),
                                                    bits_to_times(by, n_total), rng);
                    const bool structural = check_structural(ds, taps).structural_ok;
                    const bool rank = check_rank(g, ds, noise).rank_ok;
                    CAPTURE(n_total);
                    CAPTURE(taps);
                    CAPTURE(bu);
                    CAPTURE(by);
                    CHECK(structural == rank);
                }
            }
        }
    }
}

TEST_CASE("adding an observed output never breaks structural identifiability") {
    oracle::Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const int n_total = rng.integer(2, 12);
        const int taps = rng.integer(1, 4);
        std::vector<int> tu = rng.subset(n_total, rng.uniform(0.2, 1.0));
        std::vector<int> ty = rng.subset(n_total, rng.uniform(0.2, 1.0));
        if (static_cast<int>(ty.size()) == n_total) continue;
        const Dataset before = mask_dataset(n_total, tu, ty, rng);
        if (!check_structural(before, taps).structural_ok) continue;
        // add one more observed output time
        std::vector<int> candidates;
        for (int t = 1; t <= n_total; ++t) {
            if (std::find(ty.begin(), ty.end(), t) == ty.end()) candidates.push_back(t);
        }
        ty.push_back(candidates[rng.integer(0, static_cast<int>(candidates.size()) - 1)]);
        std::sort(ty.begin(), ty.end());
        const Dataset after = mask_dataset(n_total, tu, ty, rng);
        CHECK(check_structural(after, taps).structural_ok);
    }
}
