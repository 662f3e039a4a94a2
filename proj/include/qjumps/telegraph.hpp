// telegraph.hpp — click-record analysis: light/dark period segmentation,
// dwell-time statistics, no-click survival curves, and post-selected
// fidelity of the heralded state.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "qjumps/trajectory.hpp"

namespace qjumps::telegraph {

using Vec = Eigen::VectorXcd;
using trajectory::TrajectoryRecord;

struct InsufficientDataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Period {
    enum class Kind { Light, Dark, Undetermined };
    Kind kind;
    double start;
    double end;
    bool complete;  // false for the leading/trailing partial periods

    double length() const { return end - start; }
};

struct PeriodStats {
    std::optional<double> mean_dark, stderr_dark;
    std::optional<double> mean_light, stderr_light;
    std::optional<double> mean_interclick, stderr_interclick;
    // Censoring-corrected dwell-time estimates: total time spent in a kind
    // (partial periods included) over the number of completed periods. The
    // plain sample means above under-estimate long dwell times because a
    // period is excluded whenever it runs into the record boundary, which
    // happens more often the longer it is. Dark periods additionally carry a
    // truncation correction: a gap only counts as dark once it exceeds
    // tau_thresh, so tau_thresh is subtracted from every dark length (exact
    // for memoryless dwell times).
    std::optional<double> dwell_dark, dwell_light;
    int n_dark = 0;
    int n_light = 0;
    long n_interclick = 0;
};

inline std::vector<double> detected_click_times(const TrajectoryRecord& rec) {
    std::vector<double> t;
    for (const auto& ev : rec.events)
        if (ev.detected) t.push_back(ev.time);
    return t;
}

// Threshold segmentation: any detected-click gap longer than tau_thresh is a
// dark period spanning (last click, next click); the spans between dark
// periods are light periods. The stretches before the first click and after
// the last click cannot be classified completely and are flagged
// complete = false (dark if longer than tau_thresh, light otherwise).
inline std::vector<Period> segment_periods(const TrajectoryRecord& rec, double tau_thresh) {
    if (tau_thresh <= 0) throw std::invalid_argument("segment_periods: tau_thresh must be > 0");
    const std::vector<double> clicks = detected_click_times(rec);
    if (clicks.empty())
        return {Period{Period::Kind::Undetermined, 0.0, rec.t_max, false}};

    std::vector<Period> periods;
    auto push = [&](Period::Kind kind, double a, double b, bool complete) {
        if (b > a) periods.push_back({kind, a, b, complete});
    };

    // leading partial period
    push(clicks.front() > tau_thresh ? Period::Kind::Dark : Period::Kind::Light, 0.0,
         clicks.front(), false);

    double light_start = clicks.front();
    for (size_t i = 0; i + 1 < clicks.size(); ++i) {
        if (clicks[i + 1] - clicks[i] > tau_thresh) {
            push(Period::Kind::Light, light_start, clicks[i], true);
            push(Period::Kind::Dark, clicks[i], clicks[i + 1], true);
            light_start = clicks[i + 1];
        }
    }
    // the light stretch reaching the last click is bounded by clicks on both
    // sides only if a dark period follows; at the record end it is partial
    push(Period::Kind::Light, light_start, clicks.back(), false);
    push(clicks.back() + tau_thresh < rec.t_max ? Period::Kind::Dark : Period::Kind::Light,
         clicks.back(), rec.t_max, false);
    return periods;
}

namespace detail {

struct Accum {
    double sum = 0, sumsq = 0;
    long n = 0;
    void add(double x) {
        sum += x;
        sumsq += x * x;
        ++n;
    }
    std::optional<double> mean() const {
        return n > 0 ? std::optional<double>(sum / n) : std::nullopt;
    }
    std::optional<double> stderr_mean() const {
        if (n < 2) return std::nullopt;
        double m = sum / n;
        double var = (sumsq - n * m * m) / double(n - 1);
        return std::sqrt(std::max(var, 0.0) / n);
    }
};

}  // namespace detail

// Sample means with standard errors over complete periods; the interclick
// mean uses gaps between consecutive detected clicks inside complete light
// periods only.
inline PeriodStats period_stats(const std::vector<std::vector<Period>>& periods_per_traj,
                                const std::vector<TrajectoryRecord>& records,
                                double tau_thresh) {
    if (periods_per_traj.size() != records.size())
        throw std::invalid_argument("period_stats: periods/records size mismatch");

    detail::Accum dark, light, interclick;
    double total_dark = 0, total_light = 0;
    for (size_t r = 0; r < records.size(); ++r) {
        const std::vector<double> clicks = detected_click_times(records[r]);
        for (const auto& p : periods_per_traj[r]) {
            if (p.kind == Period::Kind::Dark) total_dark += p.length() - tau_thresh;
            if (p.kind == Period::Kind::Light) total_light += p.length();
            if (!p.complete) continue;
            if (p.kind == Period::Kind::Dark) {
                dark.add(p.length());
            } else if (p.kind == Period::Kind::Light) {
                light.add(p.length());
                auto lo = std::lower_bound(clicks.begin(), clicks.end(), p.start);
                auto hi = std::upper_bound(clicks.begin(), clicks.end(), p.end);
                for (auto it = lo; it != hi && std::next(it) != hi; ++it)
                    interclick.add(*std::next(it) - *it);
            }
        }
    }
    if (dark.n == 0 && light.n == 0)
        throw InsufficientDataError("period_stats: no complete periods of either kind");

    PeriodStats s;
    s.n_dark = static_cast<int>(dark.n);
    s.n_light = static_cast<int>(light.n);
    s.n_interclick = interclick.n;
    s.mean_dark = dark.mean();
    s.stderr_dark = dark.stderr_mean();
    s.mean_light = light.mean();
    s.stderr_light = light.stderr_mean();
    s.mean_interclick = interclick.mean();
    s.stderr_interclick = interclick.stderr_mean();
    if (dark.n > 0) s.dwell_dark = total_dark / dark.n;
    if (light.n > 0) s.dwell_light = total_light / light.n;
    return s;
}

// Convenience: segment every record at the same threshold and pool stats.
inline PeriodStats analyze_records(const std::vector<TrajectoryRecord>& records,
                                   double tau_thresh) {
    std::vector<std::vector<Period>> periods;
    periods.reserve(records.size());
    for (const auto& rec : records) periods.push_back(segment_periods(rec, tau_thresh));
    return period_stats(periods, records, tau_thresh);
}

struct SurvivalCurve {
    std::vector<double> t;
    std::vector<double> p;    // P(no detected click in (0, t) | click at 0)
    std::vector<double> err;  // binomial standard error
    long n_ref = 0;              // reference clicks (origins) used
};

// Empirical no-click survival: every detected click is an origin; the curve
// at t is the fraction of origins whose next detected click is more than t
// away. Origins whose remaining record is shorter than t are censored out
// of the denominator at that t.
inline SurvivalCurve survival_probability(const std::vector<TrajectoryRecord>& records,
                                          const std::vector<double>& t_grid) {
    SurvivalCurve curve;
    curve.t = t_grid;
    curve.p.assign(t_grid.size(), 0.0);
    curve.err.assign(t_grid.size(), 0.0);

    // gap to next detected click (or +inf at record end) and time left
    std::vector<double> gaps, remaining;
    for (const auto& rec : records) {
        const std::vector<double> clicks = detected_click_times(rec);
        for (size_t i = 0; i < clicks.size(); ++i) {
            double gap = (i + 1 < clicks.size())
                             ? clicks[i + 1] - clicks[i]
                             : std::numeric_limits<double>::infinity();
            gaps.push_back(gap);
            remaining.push_back(rec.t_max - clicks[i]);
        }
    }
    curve.n_ref = static_cast<long>(gaps.size());
    if (gaps.empty()) throw InsufficientDataError("survival_probability: no detected clicks");

    for (size_t j = 0; j < t_grid.size(); ++j) {
        long n = 0, k = 0;
        for (size_t i = 0; i < gaps.size(); ++i) {
            if (remaining[i] < t_grid[j]) continue;  // censored
            ++n;
            if (gaps[i] > t_grid[j]) ++k;
        }
        if (n == 0) {
            curve.p[j] = std::numeric_limits<double>::quiet_NaN();
            curve.err[j] = std::numeric_limits<double>::quiet_NaN();
            continue;
        }
        double p = double(k) / double(n);
        curve.p[j] = p;
        curve.err[j] = std::sqrt(std::max(p * (1 - p), 1.0 / double(n)) / double(n));
    }
    return curve;
}

struct FidelityEstimate {
    double value = 0;
    double stderr_value = 0;
    long n_events = 0;  // conditioning events averaged over
};

// Post-selected fidelity: over all snapshots, take those whose last detected
// click is at least t_wait in the past (within bin_width of it, so the wait
// time is sharp), and average |<target|psi>|^2. Snapshots before the first
// detected click are excluded — conditioning starts from a click.
inline FidelityEstimate conditional_fidelity(const std::vector<TrajectoryRecord>& records,
                                             double t_wait, const Vec& target,
                                             double bin_width) {
    if (t_wait <= 0) throw std::invalid_argument("conditional_fidelity: t_wait must be > 0");
    if (bin_width <= 0) throw std::invalid_argument("conditional_fidelity: bin_width must be > 0");

    detail::Accum acc;
    for (const auto& rec : records) {
        const std::vector<double> clicks = detected_click_times(rec);
        if (clicks.empty()) continue;
        for (const auto& [ts, psi] : rec.snapshots) {
            auto it = std::upper_bound(clicks.begin(), clicks.end(), ts);
            if (it == clicks.begin()) continue;  // no click yet
            double age = ts - *std::prev(it);
            if (age < t_wait || age >= t_wait + bin_width) continue;
            if (psi.size() != target.size())
                throw std::invalid_argument("conditional_fidelity: snapshot/target size mismatch");
            std::complex<double> amp = target.adjoint() * psi;
            acc.add(std::norm(amp));
        }
    }
    if (acc.n == 0)
        throw InsufficientDataError("conditional_fidelity: no conditioning events at t_wait");
    FidelityEstimate est;
    est.value = *acc.mean();
    est.stderr_value = acc.stderr_mean().value_or(0.0);
    est.n_events = acc.n;
    return est;
}

}  // namespace qjumps::telegraph
