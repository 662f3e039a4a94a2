#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "qjumps/models.hpp"

using namespace qjumps;
using Catch::Approx;
using Mat = Eigen::MatrixXcd;

namespace {
double sum_rule_residual(const models::ModelBundle& m) {
    return (m.decay_operator() - m.reset_sum()).cwiseAbs().maxCoeff();
}
}  // namespace

TEST_CASE("sum rule holds for 50 random parameter sets per model") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.05, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        models::ToyParams tp{u(rng), u(rng), u(rng)};
        REQUIRE(sum_rule_residual(models::build_toy(tp)) < 1e-12);

        models::ModelParams fp;
        fp.g1 = u(rng);
        fp.g2 = u(rng);
        fp.kappa = u(rng);
        fp.gamma0 = u(rng);
        fp.gamma1 = u(rng);
        fp.omega_L = u(rng);
        fp.omega_M1 = u(rng);
        fp.omega_M2 = u(rng);
        fp.delta = 10.0 + 50.0 * u(rng);
        fp.n_max = 1 + trial % 3;
        REQUIRE(sum_rule_residual(models::build_full(fp)) < 1e-12);
        REQUIRE(sum_rule_residual(models::to_bell_basis(models::build_full(fp))) < 1e-12);

        models::ModelParams ep = fp;
        ep.g2 = ep.g1;
        ep.omega_M2 = ep.omega_M1;
        REQUIRE(sum_rule_residual(models::build_effective(ep)) < 1e-12);
    }
}

TEST_CASE("derived rates at the C=10 reference point") {
    models::ModelParams p;  // delta=50g, omega_L=kappa=g, omega_M=0.05g, Gamma=0.1g
    auto d = models::derived_rates(p);
    REQUIRE(d.C == Approx(10.0));
    REQUIRE(d.y == Approx(-0.1));
    REQUIRE(d.delta_L == Approx(-0.005));
    REQUIRE(d.delta_C == Approx(-0.02));
    REQUIRE(d.g_eff == Approx(-1.0 / (std::sqrt(2.0) * 50.0)));
    REQUIRE(d.gamma_eff == Approx(1e-5));
    REQUIRE(d.kappa_eff == Approx(8e-4));
    REQUIRE(d.kappa_eff / d.gamma_eff == Approx(8.0 * d.C));
    REQUIRE(d.gamma_eff_0 == Approx(5e-6));

    models::ModelParams bad = p;
    bad.kappa = 0;
    REQUIRE_THROWS_WITH(models::derived_rates(bad),
                        Catch::Matchers::ContainsSubstring("kappa"));
}

TEST_CASE("symmetric bundle decouples exchange sectors in the bell basis") {
    models::ModelParams p;
    auto bell = models::to_bell_basis(models::build_full(p));
    hilbert::SpaceSpec spec{p.n_max};
    // H in the bell basis must have no matrix elements between symmetric and
    // antisymmetric atomic labels
    auto is_asym = [&](int idx) {
        const int a = idx % 9;
        return a == 2 || a == 5 || a == 7;
    };
    for (int i = 0; i < spec.dim(); ++i)
        for (int j = 0; j < spec.dim(); ++j)
            if (is_asym(i) != is_asym(j)) REQUIRE(std::abs(bell.h_cond(i, j)) < 1e-13);
}

TEST_CASE("bell-basis atomic resets match the symmetry-decomposed forms") {
    models::ModelParams p;
    p.gamma0 = 0.07;
    p.gamma1 = 0.03;
    auto bell = models::to_bell_basis(models::build_full(p));
    hilbert::SpaceSpec spec{p.n_max};
    const double s2 = std::sqrt(2.0);

    const Mat& r01 = bell.resets[0].op;  // symmetric 2->0 combination
    REQUIRE(bell.resets[0].channel == models::Channel::A20_1);
    // <00| R_01 |s02> = sqrt(Gamma0), <s01| R_01 |s12> = sqrt(Gamma0)/sqrt(2),
    // <a01| R_01 |a12> = -sqrt(Gamma0)/sqrt(2), <s02| R_01 |22> = sqrt(Gamma0)
    auto bi = [&](const char* s, int n) { return hilbert::bell_index(s, n, spec); };
    for (int n = 0; n <= p.n_max; ++n) {
        REQUIRE(r01(bi("00", n), bi("s02", n)).real() == Approx(std::sqrt(p.gamma0)));
        REQUIRE(r01(bi("s01", n), bi("s12", n)).real() == Approx(std::sqrt(p.gamma0) / s2));
        REQUIRE(r01(bi("a01", n), bi("a12", n)).real() == Approx(-std::sqrt(p.gamma0) / s2));
        REQUIRE(r01(bi("s02", n), bi("22", n)).real() == Approx(std::sqrt(p.gamma0)));
    }

    const Mat& r02 = bell.resets[1].op;  // antisymmetric 2->0 combination
    for (int n = 0; n <= p.n_max; ++n) {
        REQUIRE(r02(bi("00", n), bi("a02", n)).real() == Approx(std::sqrt(p.gamma0)));
        REQUIRE(r02(bi("s01", n), bi("a12", n)).real() == Approx(std::sqrt(p.gamma0) / s2));
        REQUIRE(r02(bi("a01", n), bi("s12", n)).real() == Approx(-std::sqrt(p.gamma0) / s2));
        REQUIRE(r02(bi("a02", n), bi("22", n)).real() == Approx(-std::sqrt(p.gamma0)));
    }

    const Mat& r11 = bell.resets[2].op;  // symmetric 2->1 combination
    for (int n = 0; n <= p.n_max; ++n) {
        REQUIRE(r11(bi("11", n), bi("s12", n)).real() == Approx(std::sqrt(p.gamma1)));
        REQUIRE(r11(bi("s01", n), bi("s02", n)).real() == Approx(std::sqrt(p.gamma1) / s2));
        REQUIRE(r11(bi("a01", n), bi("a02", n)).real() == Approx(std::sqrt(p.gamma1) / s2));
        REQUIRE(r11(bi("s12", n), bi("22", n)).real() == Approx(std::sqrt(p.gamma1)));
    }
}

TEST_CASE("two-step adiabatic elimination reproduces the effective model") {
    models::ModelParams p;  // C=10 reference point
    hilbert::SpaceSpec spec{p.n_max};
    auto bell = models::to_bell_basis(models::build_full(p));
    auto d = models::derived_rates(p);

    // step 1: eliminate all excited atomic labels (j or k = 2) at every
    // photon number; slow space = ground labels {00, s01, a01, 11} x Fock
    std::vector<int> slow1;
    for (int n = 0; n <= p.n_max; ++n)
        for (int a : {0, 1, 2, 3}) slow1.push_back(9 * n + a);
    Mat h1 = models::eliminate_fast_subspace(bell.h_cond, slow1);

    // effective laser-cavity coupling <00,1| H |s01,0> = g_eff
    // slow1 index layout: 4 per photon block
    REQUIRE(std::abs(h1(4 + 0, 1) - std::complex<double>(d.g_eff, 0)) < 2e-4);

    // step 2: eliminate the n >= 1 blocks
    std::vector<int> slow2 = {0, 1, 2, 3};
    Mat h2 = models::eliminate_fast_subspace(h1, slow2);

    auto eff = models::build_effective(p);
    // the reference effective Hamiltonian drops constant shifts and O(1/Delta^2)
    // detunings; compare after removing the trace/3-like global offset via the
    // known analytic form instead: match element-wise within the neglected
    // O(Omega^2/Delta^2) corrections
    const double scale = std::abs(d.delta_L);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            if (i == j) continue;  // diagonals carry the neglected shifts
            REQUIRE(std::abs(h2(i, j) - eff.h_cond(i, j)) < 0.05 * scale + 1e-9);
        }
    // non-Hermitian parts of the diagonal must agree (decay rates); the exact
    // Schur complement carries O(Omega^2/Delta^2) relative corrections beyond
    // the leading-order reference rates
    for (int i = 0; i < 4; ++i)
        REQUIRE(h2(i, i).imag() ==
                Approx(eff.h_cond(i, i).imag()).margin(0.02 * std::abs(eff.h_cond(i, i).imag()) + 1e-9));
}

TEST_CASE("effective model matches the leading-order operators at the C=20 point") {
    models::ModelParams p;
    p.gamma0 = p.gamma1 = 0.025;  // Gamma = 0.05 -> C=20
    auto d = models::derived_rates(p);
    REQUIRE(d.C == Approx(20.0));
    auto eff = models::build_effective(p);
    using models::kEff00;
    using models::kEff11;
    using models::kEffA01;
    using models::kEffS01;

    REQUIRE(eff.h_cond(kEff00, kEffS01).real() == Approx(p.omega_M1 / std::sqrt(2.0)));
    REQUIRE(eff.h_cond(kEff00, kEff00).real() == Approx(-d.delta_L));
    REQUIRE(eff.h_cond(kEff11, kEff11).real() == Approx(d.delta_L));
    REQUIRE(eff.h_cond(kEffA01, kEffA01).imag() == Approx(-0.5 * d.gamma_eff));
    REQUIRE(eff.h_cond(kEffS01, kEffS01).imag() == Approx(-0.5 * (d.gamma_eff + d.kappa_eff)));
    REQUIRE(eff.h_cond(kEff11, kEff11).imag() == Approx(-d.gamma_eff - 0.5 * d.kappa_eff));

    // R_C = i sqrt(kappa_eff) (|00><s01| + |s01><11|)
    const Mat& rc = eff.resets.back().op;
    REQUIRE(eff.resets.back().channel == models::Channel::Cav);
    REQUIRE(rc(kEff00, kEffS01).imag() == Approx(std::sqrt(d.kappa_eff)));
    REQUIRE(rc(kEffS01, kEff11).imag() == Approx(std::sqrt(d.kappa_eff)));

    // R_02 = -sqrt(Gamma_eff0) (|00><a01| - |a01><11|)
    const Mat& r02 = eff.resets[1].op;
    REQUIRE(r02(kEff00, kEffA01).real() == Approx(-std::sqrt(d.gamma_eff_0)));
    REQUIRE(r02(kEffA01, kEff11).real() == Approx(std::sqrt(d.gamma_eff_0)));
}

TEST_CASE("parameter validation") {
    models::ModelParams p;
    p.eta = 1.5;
    REQUIRE_THROWS_AS(p.validate(), std::invalid_argument);
    p.eta = 1.0;
    p.n_max = 0;
    REQUIRE_THROWS_AS(models::build_full(p), std::invalid_argument);
    p.n_max = 2;
    p.g2 = 2.0 * p.g1;
    REQUIRE_THROWS_AS(models::build_effective(p), std::invalid_argument);
    REQUIRE_NOTHROW(models::build_full(p));
}

TEST_CASE("regime warnings") {
    models::ModelParams good;  // reference point satisfies the hierarchy
    REQUIRE(models::check_regime(good).empty());
    models::ModelParams bad = good;
    bad.delta = 2.0;
    REQUIRE_FALSE(models::check_regime(bad).empty());
    models::ToyParams tbad{1.0, 1.0, 0.5};
    REQUIRE_FALSE(models::check_regime(tbad).empty());
}
