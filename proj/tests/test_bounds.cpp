#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace entdim;
using Catch::Matchers::WithinAbs;

namespace {
OptimConfig fast_cfg(int restarts = 12) {
    OptimConfig cfg;
    cfg.restarts = restarts;
    cfg.seed = 987654;
    return cfg;
}
}  // namespace

TEST_CASE("aligned closed form reproduces the d=4 reference values") {
    CHECK_THAT(spin_bound_aligned(1.5, 1, "xy"), WithinAbs(7.0, 1e-9));
    CHECK_THAT(spin_bound_aligned(1.5, 2, "xy"), WithinAbs(11.0, 1e-6));
    CHECK_THAT(spin_bound_aligned(1.5, 3, "xy"), WithinAbs(11.5601, 1e-3));
    CHECK_THAT(spin_bound_aligned(1.5, 4, "xy"), WithinAbs(12.0, 1e-6));

    CHECK_THAT(spin_bound_aligned(1.5, 2, "xyz"), WithinAbs(12.0, 1e-6));
    CHECK_THAT(spin_bound_aligned(1.5, 3, "xyz"), WithinAbs(13.3403, 1e-3));
    CHECK_THAT(spin_bound_aligned(1.5, 4, "xyz"), WithinAbs(15.0, 1e-6));

    CHECK_THROWS_AS(spin_bound_aligned(1.5, 2, "xyz", +1), std::invalid_argument);
    CHECK_THROWS_AS(spin_bound_aligned(1.5, 2, "xz"), std::invalid_argument);
    CHECK_THROWS_AS(spin_bound_aligned(1.5, 9, "xy"), std::invalid_argument);
}

TEST_CASE("analytic r=2 formulas") {
    CHECK_THAT(spin_bound_r2_analytic(0.5), WithinAbs(2.0, 1e-12));
    CHECK_THAT(spin_bound_r2_analytic(1.0), WithinAbs(3.0 + std::sqrt(5.0), 1e-12));
    CHECK_THAT(spin_bound_r2_analytic(1.5), WithinAbs(11.0, 1e-12));
    CHECK_THAT(spin_bound_r2_analytic(2.0), WithinAbs(11.0 + std::sqrt(37.0), 1e-12));
    CHECK_THAT(spin_bound_r2_analytic(2.5), WithinAbs(26.0, 1e-12));
    CHECK_THROWS_AS(spin_bound_r2_analytic(0.8), std::invalid_argument);
}

TEST_CASE("analytic r=2 equals the aligned closed form") {
    for (double j : {0.5, 1.0, 1.5, 2.0, 2.5})
        CHECK_THAT(spin_bound_aligned(j, 2, "xy"), WithinAbs(spin_bound_r2_analytic(j), 1e-9));
}

TEST_CASE("global spin bound") {
    CHECK_THAT(global_spin_bound(1.5), WithinAbs(12.0, 1e-12));
    CHECK_THAT(global_spin_bound(0.5), WithinAbs(2.0, 1e-12));
    CHECK_THAT(global_spin_bound(2.0), WithinAbs(20.0, 1e-12));
    // matches the aligned closed form at full rank
    for (double j : {0.5, 1.0, 1.5, 2.0})
        CHECK_THAT(spin_bound_aligned(j, static_cast<int>(std::lround(2 * j)) + 1, "xy"),
                   WithinAbs(global_spin_bound(j), 1e-6));
}

TEST_CASE("aligned enumeration in bound_Br matches the closed form") {
    OptimConfig cfg = fast_cfg(1);
    cfg.aligned_only = true;
    for (double j : {0.5, 1.0, 1.5, 2.0}) {
        SpinTriple spin{j, -1, "xy"};
        int d = spin.local_dim();
        auto res = bound_Br(spin.collective_ops(), 2, d, cfg);
        CHECK_THAT(res.variance_sum, WithinAbs(spin_bound_aligned(j, 2, "xy"), 1e-6));
        REQUIRE(res.argmax.has_value());
        CHECK(schmidt_decompose(*res.argmax).rank(1e-8) <= 2);
    }
    // xyz with the minus sign
    SpinTriple spin{1.5, -1, "xyz"};
    auto res = bound_Br(spin.collective_ops(), 2, 4, cfg);
    CHECK_THAT(res.variance_sum, WithinAbs(12.0, 1e-6));
}

TEST_CASE("free optimization reproduces the reference table at j=3/2") {
    SpinTriple xy{1.5, -1, "xy"};
    auto res = bound_Br(xy.collective_ops(), 4, 4, fast_cfg());
    REQUIRE(res.per_level.size() == 4);
    CHECK_THAT(res.per_level[0], WithinAbs(7.0, 1e-3));
    CHECK_THAT(res.per_level[1], WithinAbs(11.0, 1e-3));
    CHECK_THAT(res.per_level[2], WithinAbs(11.5601, 1e-3));
    CHECK_THAT(res.per_level[3], WithinAbs(12.0, 1e-3));
    CHECK(res.qfi_bound == 4.0 * res.variance_sum);

    SpinTriple xyz{1.5, -1, "xyz"};
    auto res3 = bound_Br(xyz.collective_ops(), 2, 4, fast_cfg());
    CHECK_THAT(res3.per_level[0], WithinAbs(7.5, 1e-3));
    CHECK_THAT(res3.per_level[1], WithinAbs(12.0, 1e-3));
}

TEST_CASE("free optimization can beat the aligned family") {
    // at j=2, r=2 the aligned conjecture fails: free rank-2 states exceed
    // the closed-form value 11 + sqrt(37)
    SpinTriple spin{2.0, -1, "xy"};
    auto res = bound_Br(spin.collective_ops(), 2, 5, fast_cfg(16));
    CHECK(res.variance_sum > spin_bound_r2_analytic(2.0) + 0.5);
    REQUIRE(res.argmax.has_value());
    CHECK(schmidt_decompose(*res.argmax).rank(1e-8) <= 2);
}

TEST_CASE("bound values are monotone in the rank and capped") {
    SpinTriple spin{1.0, -1, "xy"};
    auto ops = spin.collective_ops();
    auto res = bound_Br(ops, 3, 3, fast_cfg(8));
    for (size_t k = 0; k + 1 < res.per_level.size(); ++k)
        CHECK(res.per_level[k] <= res.per_level[k + 1] + 1e-12);

    // sanity ceiling: sum of squared spectral spans over 4
    double cap = 0;
    for (const auto& m : ops) {
        auto ev = eigh(m);
        double span = ev.values.maxCoeff() - ev.values.minCoeff();
        cap += span * span / 4.0;
    }
    CHECK(res.variance_sum <= cap + 1e-9);
}

TEST_CASE("rank-1 level equals the separable optimum") {
    SpinTriple spin{1.5, -1, "xy"};
    auto res = bound_Br(spin.collective_ops(), 1, 4, fast_cfg());
    CHECK_THAT(res.variance_sum, WithinAbs(7.0, 1e-3));
    REQUIRE(res.argmax.has_value());
    CHECK(schmidt_decompose(*res.argmax).rank(1e-8) == 1);
}

TEST_CASE("xy bounds are sign symmetric") {
    for (int r : {1, 2}) {
        SpinTriple plus{1.0, +1, "xy"}, minus{1.0, -1, "xy"};
        auto rp = bound_Br(plus.collective_ops(), r, 3, fast_cfg(8));
        auto rm = bound_Br(minus.collective_ops(), r, 3, fast_cfg(8));
        CHECK_THAT(rp.variance_sum, WithinAbs(rm.variance_sum, 1e-3));
    }
}

TEST_CASE("argmax states respect the rank constraint") {
    auto gen = testutil::rng(55);
    SpinTriple spin{1.5, -1, "xyz"};
    for (int r = 1; r <= 3; ++r) {
        auto res = bound_Br(spin.collective_ops(), r, 4, fast_cfg(6));
        REQUIRE(res.argmax.has_value());
        CHECK(schmidt_decompose(*res.argmax).rank(1e-8) <= r);
    }
}

TEST_CASE("bound_Br rejects invalid input") {
    SpinTriple spin{0.5, -1, "xy"};
    auto ops = spin.collective_ops();
    CHECK_THROWS_AS(bound_Br(ops, 3, 2, fast_cfg(1)), std::invalid_argument);
    CHECK_THROWS_AS(bound_Br(ops, 0, 2, fast_cfg(1)), std::invalid_argument);
    OptimConfig bad;
    bad.restarts = 0;
    CHECK_THROWS_AS(bound_Br(ops, 2, 2, bad), std::invalid_argument);
}

TEST_CASE("determinism: same seed gives the same values") {
    SpinTriple spin{1.0, -1, "xyz"};
    auto a = bound_Br(spin.collective_ops(), 2, 3, fast_cfg(6));
    auto b = bound_Br(spin.collective_ops(), 2, 3, fast_cfg(6));
    CHECK(a.variance_sum == b.variance_sum);
}
