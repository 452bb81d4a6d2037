#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "eivid/linops.hpp"
#include "support/oracles.hpp"

using namespace eivid;

TEST_CASE("toeplitz operator definition") {
    SUBCASE("3x2 from [1,2,3]") {
        const Matrix a = toeplitz({1, 2, 3}, 3, 2);
        const double expect[3][2] = {{1, 0}, {2, 1}, {3, 2}};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 2; ++j) CHECK(a(i, j) == expect[i][j]);
    }
    SUBCASE("band of width 1") {
        const Matrix a = toeplitz({5}, 2, 2);
        CHECK(a(0, 0) == 5);
        CHECK(a(0, 1) == 0);
        CHECK(a(1, 0) == 0);
        CHECK(a(1, 1) == 5);
    }
    SUBCASE("wider than tall") {
        const Matrix a = toeplitz({1, 2}, 2, 3);
        const double expect[2][3] = {{1, 0, 0}, {2, 1, 0}};
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 3; ++j) CHECK(a(i, j) == expect[i][j]);
    }
    SUBCASE("invalid dimensions") {
        CHECK_THROWS_AS(toeplitz({1.0}, 0, 2), std::invalid_argument);
        CHECK_THROWS_AS(toeplitz({1.0}, 2, -1), std::invalid_argument);
        CHECK_THROWS_AS(toeplitz({}, 2, 2), std::invalid_argument);
    }
}

TEST_CASE("selection operators") {
    SUBCASE("gather per the worked missing-data pattern") {
        const SelectionOperator op(9, {1, 3, 4, 7, 9});
        CHECK(op.count() == 5);
        const Vec x{10, 20, 30, 40, 50, 60, 70, 80, 90};
        CHECK(op.select(x) == Vec{10, 30, 40, 70, 90});
    }
    SUBCASE("full selection is the identity") {
        const SelectionOperator op = SelectionOperator::full(4);
        const Vec x{1, 2, 3, 4};
        CHECK(op.select(x) == x);
        CHECK(op.scatter(x) == x);
        CHECK(op.mask() == Vec{1, 1, 1, 1});
    }
    SUBCASE("single index") {
        const SelectionOperator op(2, {2});
        CHECK(op.select({7, 8}) == Vec{8});
    }
    SUBCASE("scatter places values and zero-fills") {
        const SelectionOperator op(3, {1, 3});
        CHECK(op.scatter({4, 5}) == Vec{4, 0, 5});
        CHECK(op.mask() == Vec{1, 0, 1});
    }
    SUBCASE("select after scatter is the identity on selected vectors") {
        oracle::Rng rng(23);
        for (int trial = 0; trial < 100; ++trial) {
            const int n_total = rng.integer(1, 40);
            const SelectionOperator op(n_total, rng.subset(n_total, rng.uniform(0.0, 1.0)));
            const Vec z = rng.normal_vec(op.count());
            CHECK(op.select(op.scatter(z)) == z);  // exact
        }
    }
    SUBCASE("validation") {
        CHECK_THROWS_AS(SelectionOperator(5, {3, 2}), std::invalid_argument);
        CHECK_THROWS_AS(SelectionOperator(5, {0}), std::invalid_argument);
        CHECK_THROWS_AS(SelectionOperator(5, {6}), std::invalid_argument);
        CHECK_THROWS_AS(SelectionOperator(5, {2, 2}), std::invalid_argument);
        const SelectionOperator op(3, {1});
        CHECK_THROWS_AS(op.select({1, 2}), std::invalid_argument);
        CHECK_THROWS_AS(op.scatter({1, 2}), std::invalid_argument);
    }
}

TEST_CASE("upward shift") {
    CHECK(shift_apply({1, 2, 3}, 1) == Vec{2, 3, 0});
    CHECK(shift_apply({1, 2, 3}, 0) == Vec{1, 2, 3});
    CHECK(shift_apply({1, 2, 3}, 3) == Vec{0, 0, 0});
    CHECK(shift_apply({1, 2, 3}, 7) == Vec{0, 0, 0});
    CHECK_THROWS_AS(shift_apply({1.0}, -1), std::invalid_argument);
}

TEST_CASE("toeplitz commutation: T(w) g equals T(pad(g)) w") {
    oracle::Rng rng(31);
    for (int trial = 0; trial < 25; ++trial) {
        const int n_total = rng.integer(1, 16);
        const int taps = rng.integer(1, n_total);
        const Vec w = rng.normal_vec(n_total);
        const Vec g = rng.normal_vec(taps);
        const Vec v1 = oracle::naive_matvec(toeplitz(w, n_total, taps), g);
        const Vec v2 = oracle::naive_matvec(toeplitz(zero_pad(g, n_total), n_total, n_total), w);
        for (int i = 0; i < n_total; ++i) CHECK(v1[i] == doctest::Approx(v2[i]).epsilon(1e-12));
    }
}

TEST_CASE("transpose of the full convolution operator is a shift sum") {
    // Gᵀ x = sum_k g_k S^{k-1} x
    oracle::Rng rng(37);
    const int n_total = 12, taps = 4;
    const Vec g = rng.normal_vec(taps);
    const Vec x = rng.normal_vec(n_total);
    const ToeplitzMatrix big_g(zero_pad(g, n_total), n_total, n_total);
    const Vec lhs = big_g.apply_transpose(x);
    Vec rhs(n_total, 0.0);
    for (int k = 1; k <= taps; ++k) {
        const Vec shifted = shift_apply(x, k - 1);
        for (int i = 0; i < n_total; ++i) rhs[i] += g[k - 1] * shifted[i];
    }
    for (int i = 0; i < n_total; ++i) CHECK(lhs[i] == doctest::Approx(rhs[i]).epsilon(1e-12));
}

TEST_CASE("ToeplitzMatrix products agree with the dense matrix") {
    oracle::Rng rng(41);
    for (int trial = 0; trial < 25; ++trial) {
        const int m = rng.integer(1, 14), n = rng.integer(1, 14);
        const int len = rng.integer(1, m);
        Vec src = rng.normal_vec(len);
        const ToeplitzMatrix t(src, m, n);
        const Matrix dense = t.dense();
        const Vec x = rng.normal_vec(n), z = rng.normal_vec(m);
        const Vec ax = t.apply(x), ax_ref = oracle::naive_matvec(dense, x);
        for (int i = 0; i < m; ++i) CHECK(ax[i] == doctest::Approx(ax_ref[i]).epsilon(1e-12));
        const Vec atz = t.apply_transpose(z);
        const Vec atz_ref = oracle::naive_matvec(oracle::naive_transpose(dense), z);
        for (int j = 0; j < n; ++j) CHECK(atz[j] == doctest::Approx(atz_ref[j]).epsilon(1e-12));
    }
}
