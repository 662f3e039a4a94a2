// evolve.hpp — deterministic engines: no-jump propagation under the
// conditional Hamiltonian, master-equation integration, steady states, and
// conditioned (no-detected-click) evolution.

#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "qjumps/models.hpp"

namespace qjumps::evolve {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using models::ModelBundle;
using namespace std::complex_literals;

struct StepSizeError : std::runtime_error {
    double suggested_dt;
    StepSizeError(const std::string& msg, double dt)
        : std::runtime_error(msg), suggested_dt(dt) {}
};

struct NonUniqueSteadyStateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// exp(-i H_cond dt); H_cond is time-independent so one exponential per
// (bundle, dt) is exact for arbitrary step size.
struct Propagator {
    Mat u;
    double dt;
};

inline Propagator make_propagator(const ModelBundle& bundle, double dt) {
    if (dt <= 0) throw std::invalid_argument("make_propagator: dt must be > 0");
    Mat a = -1.0i * dt * bundle.h_cond;
    return Propagator{a.exp(), dt};
}

inline Vec propagate_nojump(const Propagator& prop, const Vec& psi) {
    if (psi.size() != prop.u.rows())
        throw std::invalid_argument("propagate_nojump: dimension mismatch");
    return prop.u * psi;
}

// Returns U_cond(dt) psi, unnormalized; the caller renormalizes when needed.
inline Vec propagate_nojump(const ModelBundle& bundle, const Vec& psi, double dt) {
    return propagate_nojump(make_propagator(bundle, dt), psi);
}

// Default integrator step: 1e-3 of the fastest timescale.
template <class Params>
double default_dt(const Params& p) {
    return 1e-3 * models::fastest_timescale(p);
}

namespace detail {
inline Mat master_rhs(const ModelBundle& bundle, const Mat& rho) {
    Mat out = -1.0i * (bundle.h_cond * rho - rho * bundle.h_cond.adjoint());
    for (const auto& r : bundle.resets) out += r.op * rho * r.op.adjoint();
    return out;
}
}  // namespace detail

// Fixed-step RK4 integration of
//   rho_dot = -i (H rho - rho H^dag) + sum_i R_i rho R_i^dag.
// Trace drift beyond 1e-6 aborts with a suggested smaller step.
inline Mat integrate_master(const ModelBundle& bundle, const Mat& rho0, double t, double dt) {
    if (t < 0) throw std::invalid_argument("integrate_master: t must be >= 0");
    if (dt <= 0) throw std::invalid_argument("integrate_master: dt must be > 0");
    Mat rho = rho0;
    const double tr0 = rho0.trace().real();
    const long n_steps = std::lround(t / dt);
    double step = n_steps > 0 ? t / double(n_steps) : 0.0;
    for (long i = 0; i < n_steps; ++i) {
        Mat k1 = detail::master_rhs(bundle, rho);
        Mat k2 = detail::master_rhs(bundle, rho + 0.5 * step * k1);
        Mat k3 = detail::master_rhs(bundle, rho + 0.5 * step * k2);
        Mat k4 = detail::master_rhs(bundle, rho + step * k3);
        rho += (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (std::abs(rho.trace().real() - tr0) > 1e-6)
            throw StepSizeError("integrate_master: trace drift exceeds 1e-6, reduce step",
                                step / 10.0);
    }
    return rho;
}

namespace detail {
// Vectorized generator acting on vec(rho) (column-major):
//   L = -i (I (x) H - conj(H) (x) I) + sum conj(R) (x) R.
inline Mat liouvillian(const Mat& h, const std::vector<models::ResetOp>& resets,
                       const std::vector<int>& keep) {
    const int n = static_cast<int>(keep.size());
    auto sub = [&](const Mat& m) {
        Mat s(n, n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) s(a, b) = m(keep[a], keep[b]);
        return s;
    };
    Mat hs = sub(h);
    Mat id = Mat::Identity(n, n);
    Mat l = -1.0i * (Eigen::kroneckerProduct(id, hs).eval() -
                     Eigen::kroneckerProduct(hs.conjugate(), id).eval());
    for (const auto& r : resets) {
        Mat rs = sub(r.op);
        l += Eigen::kroneckerProduct(rs.conjugate(), rs).eval();
    }
    return l;
}
}  // namespace detail

// Steady state of the (optionally subspace-restricted) generator: solves
// L vec(rho) = 0 with Tr(rho) = 1 replacing one row. Zeroing the slow decay
// channel is the caller's responsibility (build the bundle accordingly).
// `subspace` lists the basis indices to keep; empty means the whole space.
inline Mat steady_state(const ModelBundle& bundle, std::vector<int> subspace = {}) {
    const int d = bundle.dim();
    if (subspace.empty()) {
        subspace.resize(d);
        for (int i = 0; i < d; ++i) subspace[i] = i;
    }
    const int n = static_cast<int>(subspace.size());
    Mat l = detail::liouvillian(bundle.h_cond, bundle.resets, subspace);

    // Uniqueness: the generator must have a one-dimensional null space.
    {
        Eigen::BDCSVD<Mat> svd(l);
        const auto& sv = svd.singularValues();
        const double tol = 1e-9 * sv(0);
        int null_dim = 0;
        for (int i = 0; i < sv.size(); ++i)
            if (sv(i) < tol) ++null_dim;
        if (null_dim > 1)
            throw NonUniqueSteadyStateError(
                "steady_state: generator null space has dimension " + std::to_string(null_dim));
        if (null_dim == 0)
            throw NonUniqueSteadyStateError("steady_state: generator has no null vector");
    }

    // Replace the first row with the trace constraint.
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n * n);
    rhs(0) = 1.0;
    for (int c = 0; c < n * n; ++c) l(0, c) = 0.0;
    for (int k = 0; k < n; ++k) l(0, k * n + k) = 1.0;
    Eigen::VectorXcd v = l.fullPivLu().solve(rhs);

    Mat rho_sub = Eigen::Map<Mat>(v.data(), n, n);
    rho_sub = 0.5 * (rho_sub + rho_sub.adjoint()).eval();
    rho_sub /= rho_sub.trace().real();

    Mat rho = Mat::Zero(d, d);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) rho(subspace[a], subspace[b]) = rho_sub(a, b);
    return rho;
}

// Residual norm of the full master-equation generator applied to rho.
inline double generator_residual(const ModelBundle& bundle, const Mat& rho) {
    return detail::master_rhs(bundle, rho).norm();
}

struct ConditionedCurve {
    std::vector<double> t;
    std::vector<double> survival;  // P(no detected click in (0,t))
    std::vector<double> target_population;  // <target|rho_hat(t)|target>, normalized
};

// Deterministic no-detected-click evolution: jumps on unobserved channels
// are fed back into rho, detected cavity jumps are removed (kept with
// weight 1 - eta). The unnormalized trace is the survival probability.
// Propagation uses the exponential of the vectorized generator, so the grid
// must be uniformly spaced.
inline ConditionedCurve no_click_evolution(const ModelBundle& bundle, const Mat& rho0,
                                           const std::vector<double>& t_grid,
                                           const Vec& target, double eta) {
    if (t_grid.size() < 2) throw std::invalid_argument("no_click_evolution: need >= 2 grid points");
    const double step = t_grid[1] - t_grid[0];
    for (size_t i = 1; i < t_grid.size(); ++i)
        if (std::abs((t_grid[i] - t_grid[i - 1]) - step) > 1e-9 * step)
            throw std::invalid_argument("no_click_evolution: grid must be uniform");

    std::vector<models::ResetOp> feedback;
    for (const auto& r : bundle.resets) {
        if (r.channel == models::Channel::Cav) {
            if (eta < 1.0)
                feedback.push_back({r.channel, std::sqrt(1.0 - eta) * r.op});
        } else {
            feedback.push_back(r);
        }
    }
    const int d = bundle.dim();
    std::vector<int> all(d);
    for (int i = 0; i < d; ++i) all[i] = i;
    Mat l = detail::liouvillian(bundle.h_cond, feedback, all);
    Mat e = (step * l).exp();

    ConditionedCurve curve;
    Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(rho0.data(), d * d);
    double t = t_grid[0];
    if (t != 0.0) {
        Mat e0 = (t * l).exp();
        v = (e0 * v).eval();
    }
    for (size_t i = 0; i < t_grid.size(); ++i) {
        if (i > 0) v = (e * v).eval();
        Eigen::Map<const Mat> rho(v.data(), d, d);
        double tr = rho.trace().real();
        curve.t.push_back(t_grid[i]);
        curve.survival.push_back(tr);
        double pop = (target.adjoint() * rho * target).real()(0);
        curve.target_population.push_back(tr > 0 ? pop / tr : 0.0);
    }
    return curve;
}

}  // namespace qjumps::evolve
