// trajectory.hpp — Monte Carlo quantum-jump engine: single trajectories,
// seeded parallel ensembles, detector-efficiency filtering, and a
// line-oriented record format.

#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "qjumps/evolve.hpp"
#include "qjumps/models.hpp"

namespace qjumps::trajectory {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using models::Channel;
using models::ModelBundle;

struct EmissionEvent {
    double time;
    Channel channel;
    bool detected;
};

struct DetectionPolicy {
    double eta = 1.0;           // Bernoulli detection probability for cavity clicks
    bool detect_atomic = false; // atomic emissions marked detected (no randomness)

    // The physical detector watches only the cavity output; the toy model
    // counts both photon types.
    static DetectionPolicy default_for(const ModelBundle& bundle, double eta = 1.0) {
        DetectionPolicy p;
        p.eta = eta;
        p.detect_atomic = (bundle.basis == models::BasisTag::Toy);
        return p;
    }
};

struct TrajectoryRecord {
    std::uint64_t seed = 0;
    double t_max = 0;
    double dt = 0;
    std::vector<EmissionEvent> events;
    std::vector<std::pair<double, Vec>> snapshots;
};

// splitmix64; the fixed per-trajectory seed derivation is
// seed_i = splitmix64(master_seed + (i + 1) * 0x9E3779B97F4A7C15).
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) {
    return splitmix64(master_seed + (index + 1) * 0x9E3779B97F4A7C15ULL);
}

namespace detail {

// exp(-i H dt / 2^k) for k = 0..kLevels; level kLevels gives the relative
// jump-time tolerance of 1e-6 dt.
inline constexpr int kLevels = 20;

struct PropagatorLadder {
    std::vector<Mat> u;  // u[k] = exp(-i H dt / 2^k)
    double dt;
};

inline PropagatorLadder make_ladder(const ModelBundle& bundle, double dt) {
    PropagatorLadder ladder;
    ladder.dt = dt;
    ladder.u.reserve(kLevels + 1);
    for (int k = 0; k <= kLevels; ++k)
        ladder.u.push_back(evolve::make_propagator(bundle, dt / double(1ULL << k)).u);
    return ladder;
}

inline double uniform_open(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    double r;
    do {
        r = dist(rng);
    } while (r <= 0.0);
    return r;
}

}  // namespace detail

struct RunOptions {
    double t_max = 0;
    double dt = 0;
    std::uint64_t seed = 0;
    DetectionPolicy policy;
    std::vector<double> snapshot_times;  // must be sorted ascending
};

// Standard quantum-jump unraveling: evolve the unnormalized state under
// H_cond until |psi|^2 crosses a uniform draw r, locate the crossing by
// binary subdivision of the bracketing step, pick a channel with weight
// |R_i psi|^2, collapse, repeat.
inline TrajectoryRecord run_trajectory(const ModelBundle& bundle, const Vec& psi0,
                                       const RunOptions& opt) {
    if (psi0.size() != bundle.dim())
        throw std::invalid_argument("run_trajectory: psi0 dimension mismatch");
    if (std::abs(psi0.norm() - 1.0) > 1e-6)
        throw std::invalid_argument("run_trajectory: psi0 must be normalized");
    if (opt.t_max <= 0 || opt.dt <= 0)
        throw std::invalid_argument("run_trajectory: t_max and dt must be > 0");
    if (!std::is_sorted(opt.snapshot_times.begin(), opt.snapshot_times.end()))
        throw std::invalid_argument("run_trajectory: snapshot times must be sorted");

    const auto ladder = detail::make_ladder(bundle, opt.dt);
    std::mt19937_64 rng(opt.seed);

    TrajectoryRecord rec;
    rec.seed = opt.seed;
    rec.t_max = opt.t_max;
    rec.dt = opt.dt;

    Vec psi = psi0;
    double t = 0.0;
    double r = detail::uniform_open(rng);
    size_t next_snap = 0;
    Vec scratch(psi.size());
    const double t_tol = opt.dt / double(1ULL << detail::kLevels);

    // Advance psi from t toward `target` (target - t <= dt). Returns true if
    // a norm crossing occurred; then t is the refined jump time.
    auto advance_to = [&](double target) -> bool {
        while (target - t > 0.5 * t_tol) {
            // largest sub-step that fits
            int k = 0;
            while (k < detail::kLevels && ladder.dt / double(1ULL << k) > target - t + 0.25 * t_tol)
                ++k;
            if (ladder.dt / double(1ULL << k) > target - t + 0.25 * t_tol) {
                t = target;  // residual below time tolerance
                break;
            }
            // descend while the candidate sub-step crosses r
            for (;;) {
                scratch.noalias() = ladder.u[k] * psi;
                const double n2 = scratch.squaredNorm();
                if (n2 > r) {
                    psi.swap(scratch);
                    t += ladder.dt / double(1ULL << k);
                    break;
                }
                if (k == detail::kLevels) {
                    t += ladder.dt / double(1ULL << k);
                    return true;  // jump localized to within t_tol
                }
                ++k;
            }
        }
        return false;
    };

    while (t < opt.t_max - 0.5 * t_tol) {
        double target = std::min(t + opt.dt, opt.t_max);
        bool snap_stop = false;
        if (next_snap < opt.snapshot_times.size() && opt.snapshot_times[next_snap] <= target) {
            target = std::max(opt.snapshot_times[next_snap], t);
            snap_stop = true;
        }
        if (advance_to(target)) {
            // jump at time t
            double total = 0.0;
            std::vector<double> w(bundle.resets.size());
            Vec psi_hat = psi / psi.norm();
            for (size_t i = 0; i < bundle.resets.size(); ++i) {
                w[i] = (bundle.resets[i].op * psi_hat).squaredNorm();
                total += w[i];
            }
            if (total <= 0.0)
                throw std::logic_error("run_trajectory: all jump weights vanish at crossing");
            double u = detail::uniform_open(rng) * total;
            size_t pick = 0;
            for (; pick + 1 < w.size(); ++pick) {
                if (u < w[pick]) break;
                u -= w[pick];
            }
            const auto& reset = bundle.resets[pick];
            psi = reset.op * psi_hat;
            psi /= psi.norm();
            bool detected;
            if (reset.channel == Channel::Cav)
                detected = detail::uniform_open(rng) <= opt.policy.eta;
            else
                detected = opt.policy.detect_atomic;
            double t_event = t;
            if (!rec.events.empty() && t_event <= rec.events.back().time)
                t_event = rec.events.back().time + t_tol;  // keep times strictly increasing
            rec.events.push_back({t_event, reset.channel, detected});
            r = detail::uniform_open(rng);
        } else if (snap_stop) {
            rec.snapshots.emplace_back(t, psi / psi.norm());
            ++next_snap;
        }
    }
    return rec;
}

struct EnsembleResult {
    std::vector<TrajectoryRecord> records;
    // Ensemble-averaged density matrix at each common snapshot time.
    std::vector<std::pair<double, Mat>> mean_rho;
};

inline EnsembleResult run_ensemble(const ModelBundle& bundle, const Vec& psi0,
                                   const RunOptions& base, int n_traj,
                                   std::uint64_t master_seed, int n_workers = 1) {
    if (n_traj < 1) throw std::invalid_argument("run_ensemble: n_traj must be >= 1");
    EnsembleResult out;
    out.records.resize(n_traj);

    std::atomic<int> next{0};
    auto work = [&] {
        for (;;) {
            int i = next.fetch_add(1);
            if (i >= n_traj) return;
            RunOptions opt = base;
            opt.seed = derive_seed(master_seed, static_cast<std::uint64_t>(i));
            out.records[i] = run_trajectory(bundle, psi0, opt);
        }
    };
    if (n_workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < n_workers; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }

    if (!base.snapshot_times.empty()) {
        const int d = bundle.dim();
        for (size_t s = 0; s < base.snapshot_times.size(); ++s) {
            Mat acc = Mat::Zero(d, d);
            int count = 0;
            double t_mean = 0;
            for (const auto& rec : out.records) {
                if (s >= rec.snapshots.size()) continue;
                const auto& [ts, psi] = rec.snapshots[s];
                acc += psi * psi.adjoint();
                t_mean += ts;
                ++count;
            }
            if (count > 0) out.mean_rho.emplace_back(t_mean / count, acc / double(count));
        }
    }
    return out;
}

// Re-draw detected flags on cavity events with probability eta; the state
// collapses are physical and stay untouched.
inline TrajectoryRecord apply_detection(const TrajectoryRecord& record, double eta,
                                        std::uint64_t seed) {
    if (eta < 0 || eta > 1) throw std::invalid_argument("apply_detection: eta must be in [0,1]");
    TrajectoryRecord out = record;
    std::mt19937_64 rng(seed);
    for (auto& ev : out.events)
        if (ev.channel == Channel::Cav)
            ev.detected = detail::uniform_open(rng) <= eta;
    return out;
}

// ---------------------------------------------------------------------------
// Line-oriented record format: '#'-prefixed header (seed, parameter snapshot
// supplied by the caller), one "time,channel,detected" line per event, and
// optional "S,time,re:im,..." snapshot lines.

inline void write_record(std::ostream& os, const TrajectoryRecord& rec,
                         const std::string& params_line = "") {
    os.precision(17);
    os << "# qjumps-record v1\n";
    os << "# seed=" << rec.seed << " t_max=" << rec.t_max << " dt=" << rec.dt << "\n";
    if (!params_line.empty()) os << "# params=" << params_line << "\n";
    os << "# columns: time,channel,detected\n";
    for (const auto& ev : rec.events)
        os << ev.time << ',' << models::channel_name(ev.channel) << ',' << (ev.detected ? 1 : 0)
           << '\n';
    for (const auto& [t, psi] : rec.snapshots) {
        os << "S," << t;
        for (int i = 0; i < psi.size(); ++i)
            os << ',' << psi(i).real() << ':' << psi(i).imag();
        os << '\n';
    }
}

inline TrajectoryRecord read_record(std::istream& is) {
    TrajectoryRecord rec;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream hs(line);
            std::string tok;
            while (hs >> tok) {
                if (tok.rfind("seed=", 0) == 0) rec.seed = std::stoull(tok.substr(5));
                if (tok.rfind("t_max=", 0) == 0) rec.t_max = std::stod(tok.substr(6));
                if (tok.rfind("dt=", 0) == 0) rec.dt = std::stod(tok.substr(3));
            }
            continue;
        }
        std::istringstream ls(line);
        std::string field;
        std::getline(ls, field, ',');
        if (field == "S") {
            std::getline(ls, field, ',');
            double t = std::stod(field);
            std::vector<std::complex<double>> amps;
            while (std::getline(ls, field, ',')) {
                auto sep = field.find(':');
                amps.emplace_back(std::stod(field.substr(0, sep)), std::stod(field.substr(sep + 1)));
            }
            Vec psi(amps.size());
            for (size_t i = 0; i < amps.size(); ++i) psi(i) = amps[i];
            rec.snapshots.emplace_back(t, std::move(psi));
        } else {
            EmissionEvent ev;
            ev.time = std::stod(field);
            std::getline(ls, field, ',');
            ev.channel = models::channel_from_name(field);
            std::getline(ls, field, ',');
            ev.detected = (field == "1");
            rec.events.push_back(ev);
        }
    }
    return rec;
}

}  // namespace qjumps::trajectory
