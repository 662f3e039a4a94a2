// models.hpp — conditional Hamiltonians and reset (jump) operators for the
// four-level toy model, the full two-atom/cavity model, and the effective
// ground-state model, plus derived rates and parameter-regime checks.

#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qjumps/hilbert.hpp"

namespace qjumps::models {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using namespace std::complex_literals;

// Emission channels. The effective model reuses the atomic labels for its
// symmetry-decomposed reset operators: A20_1 -> R_01, A20_2 -> R_02,
// A21_1 -> R_11, A21_2 -> R_12, CAV -> R_C.
enum class Channel { D, L, A20_1, A20_2, A21_1, A21_2, Cav };

inline const char* channel_name(Channel c) {
    switch (c) {
        case Channel::D: return "D";
        case Channel::L: return "L";
        case Channel::A20_1: return "A20_atom1";
        case Channel::A20_2: return "A20_atom2";
        case Channel::A21_1: return "A21_atom1";
        case Channel::A21_2: return "A21_atom2";
        case Channel::Cav: return "CAV";
    }
    return "?";
}

inline Channel channel_from_name(const std::string& s) {
    for (Channel c : {Channel::D, Channel::L, Channel::A20_1, Channel::A20_2,
                      Channel::A21_1, Channel::A21_2, Channel::Cav})
        if (s == channel_name(c)) return c;
    throw std::invalid_argument("unknown channel name '" + s + "'");
}

struct ResetOp {
    Channel channel;
    Mat op;
};

enum class BasisTag { Toy, Product, Bell, Effective4 };

struct ModelBundle {
    Mat h_cond;
    std::vector<ResetOp> resets;
    BasisTag basis = BasisTag::Product;
    hilbert::SpaceSpec space;  // meaningful for Product/Bell bundles

    int dim() const { return static_cast<int>(h_cond.rows()); }

    // i (H - H^dagger); equals sum_i R_i^dagger R_i for a consistent bundle.
    Mat decay_operator() const { return 1i * (h_cond - h_cond.adjoint()); }

    Mat reset_sum() const {
        Mat s = Mat::Zero(dim(), dim());
        for (const auto& r : resets) s += r.op.adjoint() * r.op;
        return s;
    }
};

// ---------------------------------------------------------------------------
// Toy model: levels {|g>, |b>, |d>, |e>} = indices {0, 1, 2, 3}.

struct ToyParams {
    double omega_L = 1.0;
    double gamma_L = 1.0;
    double gamma_D = 1e-3;

    void validate() const {
        if (omega_L < 0 || gamma_L < 0 || gamma_D < 0)
            throw std::invalid_argument("ToyParams: rates must be >= 0");
    }
};

inline constexpr int kToyG = 0, kToyB = 1, kToyD = 2, kToyE = 3;

// The type-L reset |b><e| + |g><b| has a diagonal R^dag R, so it stays one
// operator. The type-D amplitudes |g><d| and |g><b| share the target |g>, so
// lumping all four into a single matrix would introduce |d><b| cross terms
// in R^dag R that are absent from H_cond; the type-D emission is therefore
// carried as two operators under the shared channel label. The split keeps
// the jump from |e> coherent (-> (|d> + |b>)/sqrt(2)), which drives the
// dark-period statistics.
inline ModelBundle build_toy(const ToyParams& p) {
    p.validate();
    ModelBundle m;
    m.basis = BasisTag::Toy;
    Mat h = Mat::Zero(4, 4);
    h(kToyB, kToyE) = 0.5 * p.omega_L;
    h(kToyG, kToyB) = 0.5 * p.omega_L;
    h(kToyE, kToyB) = 0.5 * p.omega_L;
    h(kToyB, kToyG) = 0.5 * p.omega_L;
    h(kToyB, kToyB) -= 0.5i * (p.gamma_D + p.gamma_L);
    h(kToyD, kToyD) -= 0.5i * p.gamma_D;
    h(kToyE, kToyE) -= 0.5i * (2.0 * p.gamma_D + p.gamma_L);
    m.h_cond = h;

    if (p.gamma_D > 0) {
        Mat r1 = Mat::Zero(4, 4);
        r1(kToyD, kToyE) = std::sqrt(p.gamma_D);
        r1(kToyB, kToyE) = std::sqrt(p.gamma_D);
        r1(kToyG, kToyD) = std::sqrt(p.gamma_D);
        m.resets.push_back({Channel::D, std::move(r1)});
        Mat r2 = Mat::Zero(4, 4);
        r2(kToyG, kToyB) = std::sqrt(p.gamma_D);
        m.resets.push_back({Channel::D, std::move(r2)});
    }
    if (p.gamma_L > 0) {
        Mat r = Mat::Zero(4, 4);
        r(kToyB, kToyE) = std::sqrt(p.gamma_L);
        r(kToyG, kToyB) = std::sqrt(p.gamma_L);
        m.resets.push_back({Channel::L, std::move(r)});
    }
    return m;
}

// ---------------------------------------------------------------------------
// Full two-atom/cavity model.

struct ModelParams {
    double g1 = 1.0;
    double g2 = 1.0;
    double kappa = 1.0;
    double gamma0 = 0.05;
    double gamma1 = 0.05;
    double omega_L = 1.0;
    double omega_M1 = 0.05;
    double omega_M2 = 0.05;
    double delta = 50.0;
    double eta = 1.0;
    int n_max = 2;

    double gamma() const { return gamma0 + gamma1; }
    double g_mean() const { return 0.5 * (g1 + g2); }
    bool symmetric() const { return g1 == g2 && omega_M1 == omega_M2; }

    void validate() const {
        if (g1 < 0 || g2 < 0 || kappa < 0 || gamma0 < 0 || gamma1 < 0 ||
            omega_L < 0 || omega_M1 < 0 || omega_M2 < 0)
            throw std::invalid_argument("ModelParams: rates must be >= 0");
        if (eta < 0 || eta > 1)
            throw std::invalid_argument("ModelParams: eta must be in [0, 1]");
        if (n_max < 0)
            throw std::invalid_argument("ModelParams: n_max must be >= 0");
    }
};

struct DerivedRates {
    double C = 0;            // g^2 / (kappa Gamma)
    double y = 0;            // Delta_L / Omega_M
    double delta_L = 0;      // -Omega_L^2 / (4 Delta)
    double delta_C = 0;      // -g^2 / Delta
    double g_eff = 0;        // -Omega_L g / (sqrt(2) Delta)
    double gamma_eff = 0;    // Omega_L^2 Gamma / (4 Delta^2)
    double kappa_eff = 0;    // 2 Omega_L^2 g^2 / (kappa Delta^2)
    double gamma_eff_0 = 0;  // Gamma_0 gamma_eff / Gamma
    double gamma_eff_1 = 0;  // Gamma_1 gamma_eff / Gamma
};

inline DerivedRates derived_rates(const ModelParams& p) {
    p.validate();
    auto require_nonzero = [](double v, const char* name) {
        if (v == 0.0)
            throw std::invalid_argument(std::string("derived_rates: ") + name + " must be nonzero");
    };
    require_nonzero(p.delta, "delta");
    require_nonzero(p.kappa, "kappa");
    require_nonzero(p.gamma(), "gamma0 + gamma1");
    const double omega_m = 0.5 * (p.omega_M1 + p.omega_M2);
    require_nonzero(omega_m, "omega_M");

    const double g = p.g_mean();
    DerivedRates r;
    r.C = g * g / (p.kappa * p.gamma());
    r.delta_L = -p.omega_L * p.omega_L / (4.0 * p.delta);
    r.delta_C = -g * g / p.delta;
    r.y = r.delta_L / omega_m;
    r.g_eff = -p.omega_L * g / (std::sqrt(2.0) * p.delta);
    r.gamma_eff = p.omega_L * p.omega_L * p.gamma() / (4.0 * p.delta * p.delta);
    r.kappa_eff = 2.0 * p.omega_L * p.omega_L * g * g / (p.kappa * p.delta * p.delta);
    r.gamma_eff_0 = p.gamma0 * r.gamma_eff / p.gamma();
    r.gamma_eff_1 = p.gamma1 * r.gamma_eff / p.gamma();
    return r;
}

namespace detail {
// Embed a single-atom operator |to><from| for the given atom into the full
// product space, optionally combined with a photon-number change.
inline void add_atom_term(Mat& h, const hilbert::SpaceSpec& spec, int atom,
                          int to, int from, std::complex<double> amp) {
    for (int n = 0; n <= spec.n_max; ++n)
        for (int other = 0; other < 3; ++other) {
            hilbert::BasisIndex bf, bt;
            if (atom == 1) {
                bf = {from, other, n};
                bt = {to, other, n};
            } else {
                bf = {other, from, n};
                bt = {other, to, n};
            }
            h(hilbert::flat_index(bt, spec), hilbert::flat_index(bf, spec)) += amp;
        }
}

// amp * |to><from|_atom (x) b^dagger
inline void add_atom_bdag_term(Mat& h, const hilbert::SpaceSpec& spec, int atom,
                               int to, int from, std::complex<double> amp) {
    for (int n = 0; n + 1 <= spec.n_max; ++n)
        for (int other = 0; other < 3; ++other) {
            hilbert::BasisIndex bf, bt;
            if (atom == 1) {
                bf = {from, other, n};
                bt = {to, other, n + 1};
            } else {
                bf = {other, from, n};
                bt = {other, to, n + 1};
            }
            h(hilbert::flat_index(bt, spec), hilbert::flat_index(bf, spec)) +=
                amp * std::sqrt(double(n + 1));
        }
}
}  // namespace detail

inline Mat annihilation_operator(const hilbert::SpaceSpec& spec) {
    const int d = spec.dim();
    Mat b = Mat::Zero(d, d);
    for (int n = 1; n <= spec.n_max; ++n)
        for (int a = 0; a < 9; ++a)
            b(9 * (n - 1) + a, 9 * n + a) = std::sqrt(double(n));
    return b;
}

inline ModelBundle build_full(const ModelParams& p) {
    p.validate();
    if (p.n_max < 1)
        throw std::invalid_argument("build_full: n_max must be >= 1 for the cavity coupling");

    hilbert::SpaceSpec spec{p.n_max};
    const int d = spec.dim();
    ModelBundle m;
    m.basis = BasisTag::Product;
    m.space = spec;
    Mat h = Mat::Zero(d, d);

    const double g_atom[2] = {p.g1, p.g2};
    const double om_atom[2] = {p.omega_M1, p.omega_M2};
    Mat coupling = Mat::Zero(d, d);  // sum_i g_i |0>_i<2| b^dagger
    for (int atom = 1; atom <= 2; ++atom) {
        // laser couplings (Hermitian, both directions)
        detail::add_atom_term(h, spec, atom, 1, 2, 0.5 * p.omega_L);
        detail::add_atom_term(h, spec, atom, 2, 1, 0.5 * p.omega_L);
        detail::add_atom_term(h, spec, atom, 0, 1, 0.5 * om_atom[atom - 1]);
        detail::add_atom_term(h, spec, atom, 1, 0, 0.5 * om_atom[atom - 1]);
        detail::add_atom_bdag_term(coupling, spec, atom, 0, 2, g_atom[atom - 1]);
        // detuning and atomic decay on |2>
        detail::add_atom_term(h, spec, atom, 2, 2, p.delta - 0.5i * p.gamma());
    }
    h += coupling + coupling.adjoint();
    // cavity leakage
    Mat b = annihilation_operator(spec);
    h += (-0.5i * p.kappa) * (b.adjoint() * b);
    m.h_cond = h;

    auto atomic_reset = [&](int atom, int to, double rate, Channel ch) {
        Mat r = Mat::Zero(d, d);
        detail::add_atom_term(r, spec, atom, to, 2, std::sqrt(rate));
        m.resets.push_back({ch, std::move(r)});
    };
    atomic_reset(1, 0, p.gamma0, Channel::A20_1);
    atomic_reset(2, 0, p.gamma0, Channel::A20_2);
    atomic_reset(1, 1, p.gamma1, Channel::A21_1);
    atomic_reset(2, 1, p.gamma1, Channel::A21_2);
    m.resets.push_back({Channel::Cav, std::sqrt(p.kappa) * b});
    return m;
}

// Conjugate a product-basis bundle into the Bell-type basis. The per-atom
// atomic reset pairs are re-expressed as the symmetric/antisymmetric
// combinations (R_1 +- R_2)/sqrt(2), which reproduces the decomposed reset
// operators of the symmetric-basis formulation and leaves sum R^dag R
// unchanged.
inline ModelBundle to_bell_basis(const ModelBundle& bundle) {
    if (bundle.basis != BasisTag::Product)
        throw std::invalid_argument("to_bell_basis: bundle must be in the product basis");
    Mat u = hilbert::bell_transform(bundle.space);
    ModelBundle m;
    m.basis = BasisTag::Bell;
    m.space = bundle.space;
    m.h_cond = u * bundle.h_cond * u.adjoint();

    auto find = [&](Channel ch) -> const Mat& {
        for (const auto& r : bundle.resets)
            if (r.channel == ch) return r.op;
        throw std::logic_error("to_bell_basis: missing channel");
    };
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int j = 0; j < 2; ++j) {
        const Mat& r1 = find(j == 0 ? Channel::A20_1 : Channel::A21_1);
        const Mat& r2 = find(j == 0 ? Channel::A20_2 : Channel::A21_2);
        Mat sym = u * ((r1 + r2) * inv_sqrt2) * u.adjoint();
        Mat asym = u * ((r2 - r1) * inv_sqrt2) * u.adjoint();
        m.resets.push_back({j == 0 ? Channel::A20_1 : Channel::A21_1, std::move(sym)});
        m.resets.push_back({j == 0 ? Channel::A20_2 : Channel::A21_2, std::move(asym)});
    }
    m.resets.push_back({Channel::Cav, u * find(Channel::Cav) * u.adjoint()});
    return m;
}

// Effective 4-state model over {|00>, |s01>, |a01>, |11>} = indices 0..3.
inline constexpr int kEff00 = 0, kEffS01 = 1, kEffA01 = 2, kEff11 = 3;

inline ModelBundle build_effective(const ModelParams& p) {
    p.validate();
    if (!p.symmetric())
        throw std::invalid_argument(
            "build_effective: unsupported configuration, requires g1 == g2 and omega_M1 == omega_M2");
    if (p.delta <= 0)
        throw std::invalid_argument("build_effective: requires delta > 0");

    // gamma() may be zero here (light-subspace studies); avoid the 0/0 in
    // gamma_eff_j rather than calling derived_rates.
    const double g = p.g_mean();
    const double delta_L = -p.omega_L * p.omega_L / (4.0 * p.delta);
    const double gamma_eff = p.omega_L * p.omega_L * p.gamma() / (4.0 * p.delta * p.delta);
    const double kappa_eff = 2.0 * p.omega_L * p.omega_L * g * g / (p.kappa * p.delta * p.delta);
    const double gamma_eff_0 = p.gamma() > 0 ? p.gamma0 * gamma_eff / p.gamma() : 0.0;
    const double gamma_eff_1 = p.gamma() > 0 ? p.gamma1 * gamma_eff / p.gamma() : 0.0;
    const double om = p.omega_M1;

    ModelBundle m;
    m.basis = BasisTag::Effective4;
    Mat h = Mat::Zero(4, 4);
    const double c = om / std::sqrt(2.0);
    h(kEff00, kEffS01) += c;
    h(kEffS01, kEff00) += c;
    h(kEffS01, kEff11) += c;
    h(kEff11, kEffS01) += c;
    h(kEff00, kEff00) += -delta_L;
    h(kEff11, kEff11) += delta_L;
    h(kEffA01, kEffA01) += -0.5i * gamma_eff;
    h(kEffS01, kEffS01) += -0.5i * gamma_eff;
    h(kEff11, kEff11) += -1.0i * gamma_eff;
    h(kEffS01, kEffS01) += -0.5i * kappa_eff;
    h(kEff11, kEff11) += -0.5i * kappa_eff;
    m.h_cond = h;

    auto push = [&](Channel ch, const Mat& op) { m.resets.push_back({ch, op}); };
    {
        Mat r = Mat::Zero(4, 4);
        r(kEff00, kEffS01) = -std::sqrt(gamma_eff_0);
        r(kEffS01, kEff11) = -std::sqrt(gamma_eff_0);
        push(Channel::A20_1, r);  // R_01
    }
    {
        Mat r = Mat::Zero(4, 4);
        r(kEff00, kEffA01) = -std::sqrt(gamma_eff_0);
        r(kEffA01, kEff11) = std::sqrt(gamma_eff_0);
        push(Channel::A20_2, r);  // R_02
    }
    {
        Mat r = Mat::Zero(4, 4);
        const double a = -std::sqrt(0.5 * gamma_eff_1);
        r(kEffA01, kEffA01) = a;
        r(kEffS01, kEffS01) = a;
        r(kEff11, kEff11) = 2.0 * a;
        push(Channel::A21_1, r);  // R_11
    }
    {
        Mat r = Mat::Zero(4, 4);
        const double a = -std::sqrt(0.5 * gamma_eff_1);
        r(kEffS01, kEffA01) = a;
        r(kEffA01, kEffS01) = a;
        push(Channel::A21_2, r);  // R_12
    }
    {
        Mat r = Mat::Zero(4, 4);
        r(kEff00, kEffS01) = 1.0i * std::sqrt(kappa_eff);
        r(kEffS01, kEff11) = 1.0i * std::sqrt(kappa_eff);
        push(Channel::Cav, r);  // R_C
    }
    return m;
}

// ---------------------------------------------------------------------------
// Adiabatic elimination (Schur complement at zero energy): effective
// Hamiltonian on the slow subspace after freezing the fast amplitudes,
// H_eff = H_ss - H_sf H_ff^{-1} H_fs.
inline Mat eliminate_fast_subspace(const Mat& h, const std::vector<int>& slow) {
    const int d = static_cast<int>(h.rows());
    std::vector<bool> is_slow(d, false);
    for (int i : slow) is_slow[i] = true;
    std::vector<int> fast;
    for (int i = 0; i < d; ++i)
        if (!is_slow[i]) fast.push_back(i);
    const int ns = static_cast<int>(slow.size()), nf = static_cast<int>(fast.size());
    Mat hss(ns, ns), hsf(ns, nf), hfs(nf, ns), hff(nf, nf);
    for (int a = 0; a < ns; ++a)
        for (int b = 0; b < ns; ++b) hss(a, b) = h(slow[a], slow[b]);
    for (int a = 0; a < ns; ++a)
        for (int b = 0; b < nf; ++b) hsf(a, b) = h(slow[a], fast[b]);
    for (int a = 0; a < nf; ++a)
        for (int b = 0; b < ns; ++b) hfs(a, b) = h(fast[a], slow[b]);
    for (int a = 0; a < nf; ++a)
        for (int b = 0; b < nf; ++b) hff(a, b) = h(fast[a], fast[b]);
    return hss - hsf * hff.partialPivLu().solve(hfs);
}

// ---------------------------------------------------------------------------
// Regime checks. "Much less than" is tested as a ratio threshold; the
// default factor of 10 is configurable.
inline std::vector<std::string> check_regime(const ModelParams& p, double ratio = 10.0) {
    std::vector<std::string> warnings;
    const double g = p.g_mean();
    auto warn = [&](const std::string& msg) { warnings.push_back(msg); };
    for (auto [v, name] : {std::pair{g, "g"}, {p.kappa, "kappa"},
                           {p.gamma(), "Gamma"}, {p.omega_L, "omega_L"}}) {
        const double om = std::max(p.omega_M1, p.omega_M2);
        if (om >= v)
            warn(std::string("hierarchy: omega_M is not smaller than ") + name);
        if (p.delta < ratio * v)
            warn(std::string("hierarchy: ") + name + " is not much smaller than delta");
    }
    if (p.gamma() > 0 && p.kappa > 0) {
        const double eight_c = 8.0 * g * g / (p.kappa * p.gamma());
        if (eight_c < ratio)
            warn("dark-state condition: kappa_eff/Gamma_eff = 8C = " +
                 std::to_string(eight_c) + " is not much greater than 1");
    }
    return warnings;
}

inline std::vector<std::string> check_regime(const ToyParams& p, double ratio = 10.0) {
    std::vector<std::string> warnings;
    if (p.gamma_D * ratio > p.omega_L)
        warnings.push_back("toy condition: gamma_D is not much smaller than omega_L");
    if (p.gamma_D * ratio > p.gamma_L)
        warnings.push_back("toy condition: gamma_D is not much smaller than gamma_L");
    return warnings;
}

// Fastest coherent/dissipative timescale; the default integrator step is
// 1e-3 of this.
inline double fastest_timescale(const ModelParams& p) {
    double rate = std::max({p.kappa, p.gamma(), p.omega_L, p.g_mean()});
    if (rate <= 0) throw std::invalid_argument("fastest_timescale: all rates are zero");
    return 1.0 / rate;
}

inline double fastest_timescale(const ToyParams& p) {
    double rate = std::max({p.omega_L, p.gamma_L, p.gamma_D});
    if (rate <= 0) throw std::invalid_argument("fastest_timescale: all rates are zero");
    return 1.0 / rate;
}

}  // namespace qjumps::models
