#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <queue>
#include <stdexcept>
#include <vector>

#include "busy_period.hpp"
#include "rng.hpp"
#include "service.hpp"
#include "tail_curve.hpp"

namespace pmeq {

// Discrete-event run configuration. Stops after target_busy_periods complete
// busy periods, or at the time horizon, whichever is set (at least one must
// be). A fixed seed makes the run fully reproducible; replications use
// distinct stream indices.
struct SimConfig {
    QueueParams queue;
    std::int64_t target_busy_periods = -1;
    double horizon = -1.0;
    std::uint64_t seed = 1;
    std::uint64_t stream = 0;

    void validate() const {
        if (target_busy_periods < 1 && !(horizon > 0.0))
            throw std::invalid_argument("SimConfig: need target_busy_periods >= 1 or horizon > 0");
    }
};

struct SimResult {
    std::vector<double> busy_lengths;
    std::vector<double> idle_lengths;
    double busy_fraction = 0.0;
    std::uint64_t rng_draws = 0;

    double total_busy() const {
        double s = 0.0;
        for (double b : busy_lengths) s += b;
        return s;
    }
    double total_idle() const {
        double s = 0.0;
        for (double i : idle_lengths) s += i;
        return s;
    }
};

// Event-driven infinite-server simulation. No server state is needed beyond
// the multiset of scheduled departures: an arrival to an empty system opens
// a busy period, and the period closes when the departure count returns the
// system to empty. Idle periods are the gaps between busy periods. Busy
// periods cut off by the horizon are discarded rather than censored.
inline SimResult simulate(const SimConfig& cfg) {
    cfg.validate();
    RngStream rng(cfg.seed, cfg.stream);
    std::priority_queue<double, std::vector<double>, std::greater<double>> departures;

    SimResult out;
    double next_arrival = rng.exponential(cfg.queue.lambda);
    double busy_start = 0.0;
    double prev_busy_end = -1.0;

    const bool by_count = cfg.target_busy_periods >= 1;
    while (true) {
        const bool arrival_next = departures.empty() || next_arrival < departures.top();
        const double event_time = arrival_next ? next_arrival : departures.top();
        if (cfg.horizon > 0.0 && event_time > cfg.horizon) break;

        if (arrival_next) {
            if (departures.empty()) {
                if (prev_busy_end >= 0.0) out.idle_lengths.push_back(next_arrival - prev_busy_end);
                busy_start = next_arrival;
            }
            departures.push(next_arrival + service_sample(cfg.queue.service, rng));
            next_arrival += rng.exponential(cfg.queue.lambda);
        } else {
            const double now = departures.top();
            departures.pop();
            if (departures.empty()) {
                out.busy_lengths.push_back(now - busy_start);
                prev_busy_end = now;
                if (by_count && static_cast<std::int64_t>(out.busy_lengths.size()) >= cfg.target_busy_periods)
                    break;
            }
        }
    }

    const double tb = out.total_busy();
    const double ti = out.total_idle();
    out.busy_fraction = (tb + ti) > 0.0 ? tb / (tb + ti) : 0.0;
    out.rng_draws = rng.draws();
    return out;
}

// Empirical tail: fraction of samples strictly greater than t, on the given
// grid (a leading 0 point is prepended when missing).
inline TailCurve empirical_tail(const std::vector<double>& samples, const std::vector<double>& grid) {
    if (samples.empty()) throw std::invalid_argument("empirical_tail: empty sample list");
    if (grid.empty()) throw std::invalid_argument("empirical_tail: empty grid");
    std::vector<double> sorted = samples;
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());

    std::vector<double> g;
    if (grid.front() != 0.0) g.push_back(0.0);
    g.insert(g.end(), grid.begin(), grid.end());

    std::vector<double> vals;
    vals.reserve(g.size());
    for (double t : g) {
        const auto it = std::upper_bound(sorted.begin(), sorted.end(), t);
        vals.push_back(static_cast<double>(sorted.end() - it) / n);
    }
    return TailCurve(std::move(g), std::move(vals));
}

// Hill-style tail-index estimate from the top k order statistics: the
// reciprocal of the mean log-spacing above the k-th largest value. For a
// power tail t^{-a} the estimate converges to a; for lighter tails it
// drifts with k instead of stabilizing.
inline double tail_index_estimate(const std::vector<double>& samples, std::size_t k) {
    if (k < 10) throw std::invalid_argument("tail_index_estimate: k must be >= 10");
    if (k >= samples.size()) throw std::invalid_argument("tail_index_estimate: k must be < sample count");
    std::vector<double> top(samples);
    std::nth_element(top.begin(), top.begin() + static_cast<std::ptrdiff_t>(k), top.end(),
                     std::greater<double>());
    const double pivot = top[k];
    if (!(pivot > 0.0)) throw std::domain_error("tail_index_estimate: samples must be positive");
    double mean_log_spacing = 0.0;
    for (std::size_t i = 0; i < k; ++i) mean_log_spacing += std::log(top[i] / pivot);
    mean_log_spacing /= static_cast<double>(k);
    if (!(mean_log_spacing > 0.0))
        throw std::invalid_argument("tail_index_estimate: degenerate (all-equal) tail sample");
    return 1.0 / mean_log_spacing;
}

struct TailIndexDiagnostic {
    double estimate_at_k = 0.0;
    double estimate_at_2k = 0.0;
    bool power_tail = false;  // false flags "no power tail"

    double relative_drift() const {
        return std::abs(estimate_at_k - estimate_at_2k) / estimate_at_k;
    }
};

// Stability probe: a genuine power tail gives nearly the same estimate at k
// and 2k; a drift above 25% flags "no power tail".
inline TailIndexDiagnostic power_tail_check(const std::vector<double>& samples, std::size_t k) {
    TailIndexDiagnostic d;
    d.estimate_at_k = tail_index_estimate(samples, k);
    d.estimate_at_2k = tail_index_estimate(samples, 2 * k);
    d.power_tail = d.relative_drift() <= 0.25;
    return d;
}

}  // namespace pmeq
