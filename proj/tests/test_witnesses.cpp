#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace entdim;
using Catch::Matchers::WithinAbs;

namespace {
WitnessReport report_of(const DensityMatrix& rho) {
    int d = rho.dims[0];
    return obs1_report(rho, gellmann_basis(d), gellmann_basis(d));
}
}  // namespace

TEST_CASE("maximally entangled states saturate the h bound and certify exactly") {
    for (int d = 2; d <= 4; ++d)
        for (int r = 2; r <= d; ++r) {
            auto rho = DensityMatrix::from_pure(mes_state(d, r));
            auto rep = report_of(rho);
            CHECK_THAT(rep.h_value, WithinAbs(r - 1.0 / r, 1e-8));
            CHECK(rep.certified_min_schmidt_number == r);
            CHECK(rep.per_r[r - 2].any_violated());       // violation at r-1
            CHECK_FALSE(rep.per_r[r - 1].violated_5c);    // none at r
        }
}

TEST_CASE("rho_s saturates at every mixing probability") {
    for (auto p : std::vector<std::array<double, 3>>{
             {1, 0, 0}, {0.5, 0.5, 0}, {1.0 / 3, 1.0 / 3, 1.0 / 3}, {0.5, 0.3, 0.2}}) {
        auto rep = report_of(rho_s(p));
        CHECK_THAT(rep.h_value, WithinAbs(1.5, 1e-8));
        CHECK(rep.certified_min_schmidt_number == 2);
    }
}

TEST_CASE("product states trigger no violation") {
    auto gen = testutil::rng(8);
    for (int d : {2, 3}) {
        auto psi = tensor(testutil::random_pure({d}, gen), testutil::random_pure({d}, gen));
        auto rep = report_of(DensityMatrix::from_pure(psi));
        CHECK(rep.tr_norm_x < 1e-8);
        CHECK(rep.h_value < 1e-8);
        CHECK(rep.certified_min_schmidt_number == 1);
    }
}

TEST_CASE("unequal local dimensions are rejected") {
    auto gen = testutil::rng(9);
    auto rho = testutil::random_density({2, 3}, 2, gen);
    CHECK_THROWS_AS(obs1_report(rho, gellmann_basis(2), gellmann_basis(3)),
                    std::invalid_argument);
}

TEST_CASE("collective QFI sum reaches its endpoint on MES under optimized bases") {
    for (int d = 2; d <= 4; ++d) {
        auto rho = DensityMatrix::from_pure(mes_state(d, d));
        BasisSet ga = gellmann_basis(d), gb = gellmann_basis(d);
        auto [ga2, gb2] = optimize_local_bases(rho, ga, gb);
        CHECK_THAT(obs2_value(rho, ga2, gb2), WithinAbs(8.0 * (2 * d - 2.0 / d), 1e-8));
    }
}

TEST_CASE("collective QFI sum stays below the separable bound on product states") {
    auto gen = testutil::rng(10);
    for (int d : {2, 3}) {
        for (int trial = 0; trial < 10; ++trial) {
            auto psi = tensor(testutil::random_pure({d}, gen), testutil::random_pure({d}, gen));
            double s = obs2_value(DensityMatrix::from_pure(psi), gellmann_basis(d),
                                  gellmann_basis(d));
            CHECK(s <= 8.0 * (d - 1) + 1e-8);
        }
    }
}

TEST_CASE("obs2 value agrees with the block-trace route") {
    auto gen = testutil::rng(12);
    for (int trial = 0; trial < 20; ++trial) {
        auto rho = testutil::random_density({3, 3}, 1 + static_cast<int>(gen() % 4), gen);
        auto rep = report_of(rho);
        CHECK_THAT(obs2_value(rho, gellmann_basis(3), gellmann_basis(3)),
                   WithinAbs(rep.obs2_sum, 1e-8));
    }
}

TEST_CASE("obs2 accepts identity-extended bases") {
    auto rho = DensityMatrix::from_pure(mes_state(2, 2));
    double traceless = obs2_value(rho, gellmann_basis(2), gellmann_basis(2));
    double extended = obs2_value(rho, gellmann_basis(2, true), gellmann_basis(2, true));
    CHECK_THAT(traceless, WithinAbs(extended, 1e-10));
}

TEST_CASE("no-go bounds") {
    Matrix sz(2, 2);
    sz << 1, 0, 0, -1;
    CHECK_THAT(nogo_bound(sz, sz, 1), WithinAbs(8.0, 1e-12));
    CHECK_THAT(nogo_bound(sz, sz, 2), WithinAbs(16.0, 1e-12));
    CHECK_THAT(nogo_bound(sz, sz, 5), WithinAbs(16.0, 1e-12));

    auto s32 = spin_operators(1.5);
    CHECK_THAT(nogo_bound(s32.jz, s32.jz, 2), WithinAbs(36.0, 1e-12));
    CHECK_THROWS_AS(nogo_bound(sz, sz, 0), std::invalid_argument);

    // Bell states saturate the r>=2 bound
    auto rho = DensityMatrix::from_pure(bell_state());
    Matrix h = kron(sz, identity(2)) + kron(identity(2), sz);
    CHECK_THAT(qfi(rho, h), WithinAbs(nogo_bound(sz, sz, 2), 1e-10));
}

TEST_CASE("no-go bound holds for random rank-2 states and is achieved") {
    auto gen = testutil::rng(14);
    std::normal_distribution<double> gauss;
    for (int round = 0; round < 4; ++round) {
        int d = 3 + (round % 2);
        auto rand_herm = [&]() {
            Matrix g(d, d);
            for (int i = 0; i < d; ++i)
                for (int k = 0; k < d; ++k) g(i, k) = Complex(gauss(gen), gauss(gen));
            return Matrix((g + g.adjoint()) / 2.0);
        };
        Matrix a = rand_herm(), b = rand_herm();
        Matrix h = kron(a, identity(d)) + kron(identity(d), b);
        double cap = nogo_bound(a, b, 2);
        for (int trial = 0; trial < 50; ++trial) {
            auto psi = testutil::random_schmidt_rank_state(d, d, 2, gen);
            CHECK(qfi(DensityMatrix::from_pure(psi), h) <= cap + 1e-8);
        }
        auto sat = nogo_saturating_state(a, b);
        CHECK_THAT(qfi(DensityMatrix::from_pure(sat), h), WithinAbs(cap, 1e-8));
    }
}

TEST_CASE("two-tangle lower bound") {
    // pure states: the unclamped value equals 2 (1 - tr rho_a^2)
    auto gen = testutil::rng(15);
    for (int d : {2, 3}) {
        for (int trial = 0; trial < 20; ++trial) {
            auto psi = testutil::random_pure({d, d}, gen);
            auto rho = DensityMatrix::from_pure(psi);
            auto marg = partial_trace(rho, {0});
            double tangle = 2.0 * (1.0 - (marg.matrix * marg.matrix).trace().real());
            CHECK_THAT(two_tangle_lower_bound(rho).unclamped, WithinAbs(tangle, 1e-8));
        }
    }
    CHECK_THAT(two_tangle_lower_bound(DensityMatrix::from_pure(bell_state())).value,
               WithinAbs(1.0, 1e-10));
    auto prod = tensor(testutil::random_pure({2}, gen), testutil::random_pure({2}, gen));
    auto tt = two_tangle_lower_bound(DensityMatrix::from_pure(prod));
    CHECK_THAT(tt.value, WithinAbs(0.0, 1e-8));
    CHECK(std::abs(tt.unclamped) < 1e-8);
}

TEST_CASE("basis optimization diagonalizes the cross block") {
    auto gen = testutil::rng(16);
    for (int trial = 0; trial < 10; ++trial) {
        auto rho = testutil::random_density({3, 3}, 2, gen);
        BasisSet ga = gellmann_basis(3), gb = gellmann_basis(3);
        auto [ga2, gb2] = optimize_local_bases(rho, ga, gb);
        auto blocks = qfim_blocks(rho, ga2, gb2);
        RealMatrix offdiag = blocks.x;
        offdiag.diagonal().setZero();
        CHECK(offdiag.cwiseAbs().maxCoeff() < 1e-8);
        CHECK(blocks.x.diagonal().minCoeff() > -1e-8);
        CHECK_THAT(blocks.x.trace(), WithinAbs(trace_norm(blocks.x), 1e-8));

        // the trace-norm criterion does not change under the rotation
        auto before = obs1_report(rho, ga, gb);
        auto after = obs1_report(rho, ga2, gb2);
        CHECK_THAT(after.h_value, WithinAbs(before.h_value, 1e-8));
        CHECK_THAT(after.tr_fa, WithinAbs(before.tr_fa, 1e-8));
        CHECK_THAT(after.tr_fb, WithinAbs(before.tr_fb, 1e-8));
        CHECK_THAT(after.tr_norm_x, WithinAbs(before.tr_norm_x, 1e-8));
    }

    // zero cross block stays zero
    auto prod = tensor(testutil::random_pure({2}, gen), testutil::random_pure({2}, gen));
    auto rho = DensityMatrix::from_pure(prod);
    auto [ga2, gb2] = optimize_local_bases(rho, gellmann_basis(2), gellmann_basis(2));
    CHECK(qfim_blocks(rho, ga2, gb2).x.cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("witness quantities are invariant under basis recombination") {
    auto gen = testutil::rng(18);
    for (int trial = 0; trial < 50; ++trial) {
        auto rho = testutil::random_density({3, 3}, 1 + static_cast<int>(gen() % 3), gen);
        BasisSet ga = gellmann_basis(3), gb = gellmann_basis(3);
        auto base = obs1_report(rho, ga, gb);
        RealMatrix oa = testutil::random_orthogonal(ga.size(), gen);
        RealMatrix ob = testutil::random_orthogonal(gb.size(), gen);
        auto rot = obs1_report(rho, ga.recombined(oa), gb.recombined(ob));
        CHECK_THAT(rot.tr_fa, WithinAbs(base.tr_fa, 1e-8));
        CHECK_THAT(rot.tr_fb, WithinAbs(base.tr_fb, 1e-8));
        CHECK_THAT(rot.tr_norm_x, WithinAbs(base.tr_norm_x, 1e-8));
        CHECK_THAT(rot.h_value, WithinAbs(base.h_value, 1e-8));
    }
}

TEST_CASE("no false violations on states of known rank") {
    auto gen = testutil::rng(19);
    for (int d = 2; d <= 3; ++d)
        for (int r = 1; r <= d; ++r)
            for (int trial = 0; trial < 100; ++trial) {
                auto psi = testutil::random_schmidt_rank_state(d, d, r, gen);
                auto rep = report_of(DensityMatrix::from_pure(psi));
                CHECK(rep.certified_min_schmidt_number <= r);
            }
}

TEST_CASE("the collective bound implies the trace-norm bound on symmetric states") {
    // when tr F_a = tr F_b and the bases diagonalize the cross block, a
    // violation of the collective-QFI bound forces an Obs.1 violation
    auto gen = testutil::rng(20);
    Matrix swap = Matrix::Zero(9, 9);
    for (int x = 0; x < 3; ++x)
        for (int y = 0; y < 3; ++y) swap(x * 3 + y, y * 3 + x) = 1.0;
    for (int trial = 0; trial < 30; ++trial) {
        auto raw = testutil::random_density({3, 3}, 1 + static_cast<int>(gen() % 3), gen);
        Matrix sym = (raw.matrix + swap * raw.matrix * swap.adjoint()) / 2.0;
        DensityMatrix rho(sym, {3, 3});
        BasisSet ga = gellmann_basis(3), gb = gellmann_basis(3);
        auto [ga2, gb2] = optimize_local_bases(rho, ga, gb);
        auto rep = obs1_report(rho, ga2, gb2);
        if (std::abs(rep.tr_fa - rep.tr_fb) > 1e-6) continue;
        for (const auto& v : rep.per_r)
            if (v.violated_7) CHECK((v.violated_5a || v.violated_5b || v.violated_5c));
    }
}

TEST_CASE("h is reported at the certified rank") {
    auto rho = DensityMatrix::from_pure(mes_state(3, 3));
    auto rep = report_of(rho);
    CHECK(rep.certified_min_schmidt_number == 3);
    CHECK_THAT(rep.h_value, WithinAbs(3.0 - 1.0 / 3.0, 1e-8));
    // MES(3,3) violates the r=2 bound
    CHECK(rep.per_r[1].violated_5c);
    CHECK(rep.h_value > rep.per_r[1].bound_5c);
}
