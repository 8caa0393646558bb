#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace pmeq {

inline std::vector<double> linspace(double a, double b, int n) {
    if (n < 2) throw std::invalid_argument("linspace: need at least 2 points");
    if (!(b > a)) throw std::invalid_argument("linspace: need b > a");
    std::vector<double> g(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
    return g;
}

inline std::vector<double> logspace(double a, double b, int n) {
    if (n < 2) throw std::invalid_argument("logspace: need at least 2 points");
    if (!(a > 0.0 && b > a)) throw std::invalid_argument("logspace: need 0 < a < b");
    std::vector<double> g(static_cast<std::size_t>(n));
    const double la = std::log(a), lb = std::log(b);
    for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = std::exp(la + (lb - la) * i / (n - 1));
    g.front() = a;
    g.back() = b;
    return g;
}

// A function sampled on a monotone time grid that starts at 0. Producers
// document values[0]; probability tails carry exactly 1 there.
struct TailCurve {
    std::vector<double> grid;
    std::vector<double> values;

    TailCurve() = default;
    TailCurve(std::vector<double> g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
        validate();
    }

    void validate() const {
        if (grid.size() != values.size()) throw std::invalid_argument("TailCurve: grid/values size mismatch");
        if (grid.size() < 2) throw std::invalid_argument("TailCurve: need at least 2 points");
        if (grid.front() != 0.0) throw std::invalid_argument("TailCurve: grid must start at 0");
        for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
            if (!(grid[i + 1] > grid[i])) throw std::invalid_argument("TailCurve: grid must increase strictly");
        }
        for (double v : values) {
            if (!std::isfinite(v)) throw std::invalid_argument("TailCurve: values must be finite");
        }
    }

    double value_at(double t) const {
        if (t <= grid.front()) return values.front();
        if (t >= grid.back()) return values.back();
        std::size_t hi = 1;
        while (grid[hi] < t) ++hi;
        const double w = (t - grid[hi - 1]) / (grid[hi] - grid[hi - 1]);
        return values[hi - 1] + w * (values[hi] - values[hi - 1]);
    }

    // Trapezoid of t^n * value(t) over [0, upto]; the final partial panel is
    // linearly interpolated. upto beyond the grid is clamped to the grid end.
    double weighted_integral(int n, double upto) const {
        if (n < 0) throw std::invalid_argument("TailCurve::weighted_integral: n must be >= 0");
        if (upto <= 0.0) return 0.0;
        const double t_end = std::min(upto, grid.back());
        auto w = [&](std::size_t i) { return std::pow(grid[i], n) * values[i]; };
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < grid.size() && grid[i] < t_end; ++i) {
            if (grid[i + 1] <= t_end) {
                acc += 0.5 * (w(i) + w(i + 1)) * (grid[i + 1] - grid[i]);
            } else {
                const double v_end = value_at(t_end);
                acc += 0.5 * (w(i) + std::pow(t_end, n) * v_end) * (t_end - grid[i]);
            }
        }
        return acc;
    }

    double integral() const { return weighted_integral(0, grid.back()); }
};

}  // namespace pmeq
