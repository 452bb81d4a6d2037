#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "eivid/io.hpp"
#include "eivid/simulate.hpp"
#include "support/oracles.hpp"

using namespace eivid;

TEST_CASE("random systems are deterministic in the seed") {
    const SyntheticSystem a = random_system(1234), b = random_system(1234);
    CHECK(a.g_true == b.g_true);
    CHECK(a.order == b.order);
    CHECK(random_system(1235).g_true != a.g_true);
}

TEST_CASE("random systems respect the construction constraints") {
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const SyntheticSystem sys = random_system(seed);
        CHECK(sys.spectral_radius <= 0.95);
        CHECK(sys.order >= 5);
        CHECK(sys.order <= 30);
        // unit noise-free output variance up to the truncated tail
        double sum_sq = 0.0;
        for (double g : sys.g_true) sum_sq += g * g;
        CHECK(std::abs(sum_sq - 1.0) <= 1e-10);
    }
}

TEST_CASE("long-run output variance sits near one") {
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const SyntheticSystem sys = random_system(seed);
        const SyntheticData data = generate_data(sys, 10000, 0.0, 0.0, mix_seed(seed, 2));
        double mean = 0.0;
        for (double v : data.v_true) mean += v;
        mean /= data.v_true.size();
        double var = 0.0;
        for (double v : data.v_true) var += (v - mean) * (v - mean);
        var /= data.v_true.size();
        CAPTURE(seed);
        CHECK(var >= 0.9);
        CHECK(var <= 1.1);
    }
}

TEST_CASE("data generation") {
    const SyntheticSystem sys = random_system(9);
    SUBCASE("zero noise reproduces the true signals exactly") {
        const SyntheticData data = generate_data(sys, 64, 0.0, 0.0, 17);
        CHECK(data.dataset.u_obs == data.w_true);
        CHECK(data.dataset.y_obs == data.v_true);
        CHECK(data.dataset.input_obs.is_full());
        CHECK(data.dataset.output_obs.is_full());
    }
    SUBCASE("noiseless output matches the convolution loop") {
        const SyntheticData data = generate_data(sys, 50, 0.3, 0.2, 18);
        Vec g = sys.g_true;
        if (g.size() > 50) g.resize(50);
        const Vec v_ref = oracle::naive_convolve(data.w_true, g);
        for (int t = 0; t < 50; ++t) {
            CHECK(data.v_true[t] == doctest::Approx(v_ref[t]).epsilon(1e-12));
        }
    }
    SUBCASE("empirical noise variance tracks the requested level") {
        const double sy2 = 0.25;
        const SyntheticData data = generate_data(sys, 10000, 0.1, sy2, 19);
        double acc = 0.0;
        for (std::size_t t = 0; t < data.v_true.size(); ++t) {
            const double e = data.dataset.y_obs[t] - data.v_true[t];
            acc += e * e;
        }
        acc /= data.v_true.size();
        CHECK(std::abs(acc - sy2) <= 0.05 * sy2);
    }
    SUBCASE("same seed gives identical data") {
        const SyntheticData a = generate_data(sys, 32, 0.1, 0.1, 21);
        const SyntheticData b = generate_data(sys, 32, 0.1, 0.1, 21);
        CHECK(a.dataset == b.dataset);
    }
}

TEST_CASE("mask application") {
    const SyntheticSystem sys = random_system(13);
    const SyntheticData data = generate_data(sys, 210, 0.1, 0.1, 23);
    SUBCASE("zero fractions leave the dataset unchanged") {
        CHECK(apply_missing(data.dataset, 0.0, 0.0, 29) == data.dataset);
    }
    SUBCASE("drops exactly floor(frac N) samples") {
        const Dataset masked = apply_missing(data.dataset, 0.5, 0.1, 29);
        CHECK(masked.n_u() == 105);
        CHECK(masked.n_y() == 189);
        // surviving values equal the originals at the surviving times
        const Vec u_full = data.dataset.input_obs.scatter(data.dataset.u_obs);
        for (int k = 0; k < masked.n_u(); ++k) {
            CHECK(masked.u_obs[k] == u_full[masked.input_obs.times[k] - 1]);
        }
    }
    SUBCASE("deterministic in the seed") {
        const Dataset a = apply_missing(data.dataset, 0.3, 0.3, 31);
        const Dataset b = apply_missing(data.dataset, 0.3, 0.3, 31);
        CHECK(a == b);
        const Dataset c = apply_missing(data.dataset, 0.3, 0.3, 32);
        CHECK(a != c);
    }
    SUBCASE("fraction validation") {
        CHECK_THROWS_AS(apply_missing(data.dataset, -0.1, 0.0, 1), std::invalid_argument);
        CHECK_THROWS_AS(apply_missing(data.dataset, 0.0, 0.95, 1), std::invalid_argument);
    }
}

TEST_CASE("scenario levels and validation") {
    CHECK(default_levels(Scenario::A1) == std::vector<double>{0.0, 0.1, 0.2, 0.3, 0.4, 0.5});
    CHECK(default_levels(Scenario::A3) == std::vector<double>{0.0, 0.05, 0.10, 0.15, 0.20, 0.25});
    CHECK(default_levels(Scenario::B) == std::vector<double>{0.0, 0.2, 0.4, 0.6, 0.8, 1.0});
    CHECK(scenario_from_string("A2") == Scenario::A2);
    CHECK_THROWS_AS(scenario_from_string("Exp4"), std::invalid_argument);

    ScenarioSpec spec;
    spec.scenario = Scenario::A3;
    spec.levels = {0.0, 0.3};  // outside the A3 grid
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}

TEST_CASE("scenario runs are deterministic and plausible") {
    ScenarioSpec spec;
    spec.scenario = Scenario::A1;
    spec.levels = {0.0, 0.2};
    spec.runs = 4;
    spec.horizon = 48;
    spec.n = 10;
    spec.seed = 77;

    const auto rows_a = run_scenario(spec, 2);
    const auto rows_b = run_scenario(spec, 1);  // different parallelism, same bytes
    REQUIRE(rows_a.size() == 2);
    for (std::size_t i = 0; i < rows_a.size(); ++i) {
        CHECK(rows_a[i].level == rows_b[i].level);
        CHECK(rows_a[i].median_fit_g == rows_b[i].median_fit_g);
        CHECK(rows_a[i].median_fit_w == rows_b[i].median_fit_w);
        CHECK(rows_a[i].median_fit_v == rows_b[i].median_fit_v);
        CHECK(rows_a[i].non_identifiable == rows_b[i].non_identifiable);
        CHECK(rows_a[i].median_fit_g <= 1.0);
        CHECK(std::isnan(rows_a[i].median_fit_g_naive));
    }
    const std::string csv_a = io::benchmark_csv(spec, rows_a);
    const std::string csv_b = io::benchmark_csv(spec, rows_b);
    CHECK(csv_a == csv_b);
}

TEST_CASE("scenario B reports both estimators") {
    ScenarioSpec spec;
    spec.scenario = Scenario::B;
    spec.levels = {0.0, 0.4};
    spec.runs = 3;
    spec.horizon = 40;
    spec.n = 8;
    spec.seed = 5;
    const auto rows = run_scenario(spec, 2);
    REQUIRE(rows.size() == 2);
    for (const auto& r : rows) {
        CHECK(std::isfinite(r.median_fit_g));
        CHECK(std::isfinite(r.median_fit_g_naive));
    }
}
