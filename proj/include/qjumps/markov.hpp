// markov.hpp — closed-form predictions for the telegraph statistics: dwell
// timescales, light/dark/click rates, no-click survival probabilities split
// by end state, the conditional fidelity curve and its asymptote, plus an
// exact continuous-time Markov-chain Monte Carlo oracle.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "qjumps/models.hpp"
#include "qjumps/trajectory.hpp"

namespace qjumps::markov {

// Two-state telegraph rates: gamma_L takes a light period to a dark one,
// gamma_D a dark period back to light, gamma_C is the physical cavity click
// rate while in a light period; the detector sees clicks at eta * gamma_C.
struct RateSet {
    double gamma_L = 0;
    double gamma_D = 0;
    double gamma_C = 0;
    double eta = 1.0;

    double detected_click_rate() const { return eta * gamma_C; }

    void validate() const {
        if (gamma_L < 0 || gamma_D < 0 || gamma_C < 0)
            throw std::invalid_argument("RateSet: rates must be >= 0");
        if (eta < 0 || eta > 1) throw std::invalid_argument("RateSet: eta must be in [0,1]");
    }
};

struct Timescales {
    double t_dark = 0;   // mean dark-period length
    double t_light = 0;  // mean light-period length
    double t_click = 0;  // mean time between detected clicks in a light period
};

// Four-level toy model, x = Omega_L / Gamma_L:
//   T_D = 1/Gamma_D
//   T_E = (1 + 2x^2 + 3x^4) / ((x^2 + 2x^4) Gamma_L)
//   T_L = (1 + 2x^2 + 3x^4) / (x^4 Gamma_D)
// x = 0 leaves the system stuck in |g>, so T_E and T_L are infinite.
inline Timescales toy_timescales(double x, double gamma_L_rate, double gamma_D_rate) {
    if (x < 0) throw std::invalid_argument("toy_timescales: x must be >= 0");
    if (gamma_L_rate <= 0 || gamma_D_rate <= 0)
        throw std::invalid_argument("toy_timescales: rates must be > 0");
    Timescales t;
    t.t_dark = 1.0 / gamma_D_rate;
    const double x2 = x * x, x4 = x2 * x2;
    const double num = 1.0 + 2.0 * x2 + 3.0 * x4;
    if (x == 0.0) {
        t.t_click = std::numeric_limits<double>::infinity();
        t.t_light = std::numeric_limits<double>::infinity();
    } else {
        t.t_click = num / ((x2 + 2.0 * x4) * gamma_L_rate);
        t.t_light = num / (x4 * gamma_D_rate);
    }
    return t;
}

// Two-atom/cavity model, y = Delta_L / Omega_M with Delta_L = -Omega_L^2/(4 Delta):
//   T_C = (3 + 4y^2) kappa Delta^2 / (4 Omega_L^2 g^2)
//   T_L = (3 + 16y^2 + 16y^4) 8 Delta^2 / ((2 Gamma0 + (1 + 8y^2) Gamma1) Omega_L^2)
//   T_D = 8 Delta^2 / ((2 Gamma0 + Gamma1) Omega_L^2)
inline Timescales cavity_timescales(const models::ModelParams& p) {
    p.validate();
    const auto d = models::derived_rates(p);
    const double y = d.y;
    const double y2 = y * y, y4 = y2 * y2;
    const double g = p.g_mean();
    const double wl2 = p.omega_L * p.omega_L;
    const double delta2 = p.delta * p.delta;
    const double denom_l = (2.0 * p.gamma0 + (1.0 + 8.0 * y2) * p.gamma1) * wl2;
    const double denom_d = (2.0 * p.gamma0 + p.gamma1) * wl2;
    if (denom_l == 0 || denom_d == 0)
        throw std::invalid_argument("cavity_timescales: atomic decay rates are all zero");
    Timescales t;
    t.t_click = (3.0 + 4.0 * y2) * p.kappa * delta2 / (4.0 * wl2 * g * g);
    t.t_light = (3.0 + 16.0 * y2 + 16.0 * y4) * 8.0 * delta2 / denom_l;
    t.t_dark = 8.0 * delta2 / denom_d;
    return t;
}

inline RateSet rates(const models::ModelParams& p) {
    const Timescales t = cavity_timescales(p);
    RateSet r;
    r.gamma_L = 1.0 / t.t_light;
    r.gamma_D = 1.0 / t.t_dark;
    r.gamma_C = 1.0 / t.t_click;
    r.eta = p.eta;
    return r;
}

namespace detail {

// sinh(a t)/a and cosh(a t) with a series fallback below |a t| < 1e-4 to
// avoid cancellation; exact for a = 0.
struct HypPair {
    double sinh_over_a;  // sinh(a t) / a
    double cosh_val;     // cosh(a t)
};

inline HypPair hyp(double a, double t) {
    const double at = a * t;
    if (std::abs(at) < 1e-4) {
        const double at2 = at * at;
        HypPair h;
        h.sinh_over_a = t * (1.0 + at2 / 6.0 * (1.0 + at2 / 20.0 * (1.0 + at2 / 42.0)));
        h.cosh_val = 1.0 + at2 / 2.0 * (1.0 + at2 / 12.0 * (1.0 + at2 / 30.0));
        return h;
    }
    return HypPair{std::sinh(at) / a, std::cosh(at)};
}

inline double decay_sum(const RateSet& r) {
    return r.detected_click_rate() + r.gamma_D + r.gamma_L;
}

inline double a_rate(const RateSet& r) {
    const double s = decay_sum(r);
    const double disc = s * s - 4.0 * r.detected_click_rate() * r.gamma_D;
    return 0.5 * std::sqrt(std::max(disc, 0.0));
}

}  // namespace detail

struct NoClickProbabilities {
    double p_dark;   // P(no detected click in (0,t) AND in a dark period at t)
    double p_light;  // P(no detected click in (0,t) AND in a light period at t)
};

// Closed forms with A = sqrt((eta gC + gD + gL)^2 - 4 eta gC gD)/2 and
// s = eta gC + gD + gL:
//   P_dark(t)  = gL sinh(At)/A exp(-st/2)
//   P_light(t) = [cosh(At) - (eta gC + gL - gD) sinh(At)/(2A)] exp(-st/2)
inline NoClickProbabilities no_click_probabilities(const RateSet& r, double t) {
    r.validate();
    if (t < 0) throw std::invalid_argument("no_click_probabilities: t must be >= 0");
    const double s = detail::decay_sum(r);
    const double a = detail::a_rate(r);
    const auto h = detail::hyp(a, t);
    const double env = std::exp(-0.5 * s * t);
    NoClickProbabilities p;
    p.p_dark = r.gamma_L * h.sinh_over_a * env;
    p.p_light = (h.cosh_val - 0.5 * (r.detected_click_rate() + r.gamma_L - r.gamma_D) *
                                  h.sinh_over_a) *
                env;
    return p;
}

// F(t) = 2 gL sinh(At) / (2A cosh(At) - (eta gC - gD - gL) sinh(At)),
// identically P_dark / (P_dark + P_light). For large At both hyperbolics
// overflow; divide through by exp(At) instead.
inline double fidelity_curve(const RateSet& r, double t) {
    r.validate();
    if (t < 0) throw std::invalid_argument("fidelity_curve: t must be >= 0");
    const double a = detail::a_rate(r);
    const double b = r.detected_click_rate() - r.gamma_D - r.gamma_L;
    const double at = a * t;
    if (at > 350.0) {
        // sinh, cosh -> exp(At)/2
        return 2.0 * r.gamma_L / (2.0 * a - b);
    }
    const auto h = detail::hyp(a, t);
    const double denom = 2.0 * h.cosh_val - b * h.sinh_over_a;
    return 2.0 * r.gamma_L * h.sinh_over_a / denom;
}

// F(infinity) in the optimal regime, as a function of the detected
// cooperativity eta*C only:
//   F = 3 / (2 [sqrt(256 (eta C)^2 - 48 eta C + 9) - 16 eta C + 3])
inline double asymptotic_fidelity(double c, double eta) {
    if (c <= 0) throw std::invalid_argument("asymptotic_fidelity: C must be > 0");
    if (eta <= 0 || eta > 1)
        throw std::invalid_argument("asymptotic_fidelity: eta must be in (0,1]");
    const double ec = eta * c;
    const double disc = 256.0 * ec * ec - 48.0 * ec + 9.0;
    return 3.0 / (2.0 * (std::sqrt(disc) - 16.0 * ec + 3.0));
}

// Optimal-regime (y = 0, Gamma0 = Gamma1) rate set for a given C, in units
// of gamma_C: gL = 3 gC / (64 C), gD = 9 gC / (64 C).
inline RateSet optimal_rates(double c, double eta, double gamma_C = 1.0) {
    if (c <= 0) throw std::invalid_argument("optimal_rates: C must be > 0");
    RateSet r;
    r.gamma_C = gamma_C;
    r.gamma_L = 3.0 * gamma_C / (64.0 * c);
    r.gamma_D = 9.0 * gamma_C / (64.0 * c);
    r.eta = eta;
    return r;
}

struct OracleCurves {
    std::vector<double> t;
    std::vector<double> p_dark, p_dark_err;
    std::vector<double> p_light, p_light_err;
    std::vector<double> f, f_err;
    long n_samples = 0;
};

// Independent Monte Carlo oracle: the exact two-state chain (L -> D at
// gamma_L, D -> L at gamma_D) with Poisson detected clicks at eta*gamma_C
// while in L, started in L at a click. Waiting times are exponential
// compositions, so there is no time discretization. Tallies the no-click
// survival at each grid time, split by the state occupied then.
inline OracleCurves markov_oracle(const RateSet& r, const std::vector<double>& t_grid,
                                  long n_samples, std::uint64_t seed) {
    r.validate();
    if (n_samples < 1) throw std::invalid_argument("markov_oracle: n_samples must be >= 1");
    if (!std::is_sorted(t_grid.begin(), t_grid.end()))
        throw std::invalid_argument("markov_oracle: t_grid must be sorted");

    const double g_click = r.detected_click_rate();
    std::mt19937_64 rng(trajectory::splitmix64(seed));
    std::exponential_distribution<double> exp_dist(1.0);

    std::vector<long> n_dark(t_grid.size(), 0), n_light(t_grid.size(), 0);
    for (long s = 0; s < n_samples; ++s) {
        bool light = true;
        double t = 0.0;
        size_t next = 0;
        while (next < t_grid.size()) {
            const double out_rate = light ? (g_click + r.gamma_L) : r.gamma_D;
            double dt = out_rate > 0 ? exp_dist(rng) / out_rate
                                     : std::numeric_limits<double>::infinity();
            // tally grid points passed without an event
            while (next < t_grid.size() && t_grid[next] < t + dt) {
                (light ? n_light : n_dark)[next] += 1;
                ++next;
            }
            if (next >= t_grid.size()) break;
            t += dt;
            if (light) {
                // which event fired: click kills the sample, switch flips it
                std::uniform_real_distribution<double> u(0.0, 1.0);
                if (u(rng) * (g_click + r.gamma_L) < g_click) break;  // detected click
                light = false;
            } else {
                light = true;
            }
        }
    }

    OracleCurves out;
    out.t = t_grid;
    out.n_samples = n_samples;
    const double n = double(n_samples);
    auto binom_err = [&](double p) { return std::sqrt(std::max(p * (1 - p), 1.0 / n) / n); };
    for (size_t i = 0; i < t_grid.size(); ++i) {
        const double pd = n_dark[i] / n;
        const double pl = n_light[i] / n;
        out.p_dark.push_back(pd);
        out.p_dark_err.push_back(binom_err(pd));
        out.p_light.push_back(pl);
        out.p_light_err.push_back(binom_err(pl));
        const double tot = pd + pl;
        const double f = tot > 0 ? pd / tot : 0.0;
        out.f.push_back(f);
        // conditional proportion error on the surviving subsample
        const double n_cond = std::max(tot * n, 1.0);
        out.f_err.push_back(std::sqrt(std::max(f * (1 - f), 1.0 / n_cond) / n_cond));
    }
    return out;
}

}  // namespace qjumps::markov
