#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <queue>
#include <type_traits>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace pmeq {

struct QuadOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    int max_intervals = 4000;
};

template <typename T>
struct QuadResult {
    T value{};
    double error = 0.0;        // estimated absolute error
    bool converged = false;
    int intervals = 0;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule (positive abscissae,
// outermost first; node 7 is the centre). Standard QUADPACK values.
inline constexpr std::array<double, 8> kGk15Nodes = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
};

inline constexpr std::array<double, 8> kGk15KronrodW = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};

// Gauss weights for nodes 1, 3, 5 and the centre.
inline constexpr std::array<double, 4> kGk15GaussW = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

template <typename T>
struct PanelEstimate {
    T value{};
    double error = 0.0;
    double resabs = 0.0;
};

// One G7/K15 panel over [a, b] with the QUADPACK error heuristic.
template <typename F, typename T = std::invoke_result_t<F&, double>>
PanelEstimate<T> gk15_panel(F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);

    std::array<T, 15> fv{};
    const T fc = f(c);
    fv[14] = fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kGk15Nodes[j];
        fv[2 * j] = f(c - dx);
        fv[2 * j + 1] = f(c + dx);
    }

    T resk = kGk15KronrodW[7] * fc;
    T resg = kGk15GaussW[3] * fc;
    double resabs = kGk15KronrodW[7] * std::abs(fc);
    for (int j = 0; j < 7; ++j) {
        const T pair = fv[2 * j] + fv[2 * j + 1];
        resk += kGk15KronrodW[j] * pair;
        resabs += kGk15KronrodW[j] * (std::abs(fv[2 * j]) + std::abs(fv[2 * j + 1]));
        if (j % 2 == 1) resg += kGk15GaussW[j / 2] * pair;
    }

    const T mean = resk * 0.5;
    double resasc = kGk15KronrodW[7] * std::abs(fc - mean);
    for (int j = 0; j < 7; ++j) {
        resasc += kGk15KronrodW[j] * (std::abs(fv[2 * j] - mean) + std::abs(fv[2 * j + 1] - mean));
    }

    PanelEstimate<T> out;
    out.value = resk * h;
    out.resabs = resabs * std::abs(h);
    resasc *= std::abs(h);

    double err = std::abs(resk - resg) * std::abs(h);
    if (resasc != 0.0 && err != 0.0) {
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    }
    const double eps = std::numeric_limits<double>::epsilon();
    const double tiny = std::numeric_limits<double>::min();
    if (out.resabs > tiny / (50.0 * eps)) {
        err = std::max(err, 50.0 * eps * out.resabs);
    }
    out.error = err;
    return out;
}

}  // namespace detail

// Adaptive Gauss-Kronrod integration of f over the segments defined by the
// sorted breakpoint list. Worst-error-first refinement; works for real and
// complex-valued integrands alike.
template <typename F, typename T = std::invoke_result_t<F&, double>>
QuadResult<T> integrate_segments(F&& f, const std::vector<double>& breakpoints,
                                 const QuadOptions& opts = {}) {
    struct Seg {
        double a, b;
        T value;
        double error;
    };
    struct SegLess {
        bool operator()(const Seg& x, const Seg& y) const { return x.error < y.error; }
    };

    std::priority_queue<Seg, std::vector<Seg>, SegLess> active;
    std::vector<Seg> frozen;  // segments at machine resolution, not refined further

    T total{};
    double total_err = 0.0;
    int count = 0;

    auto push_panel = [&](double a, double b) {
        auto est = detail::gk15_panel(f, a, b);
        Seg s{a, b, est.value, est.error};
        total += s.value;
        total_err += s.error;
        ++count;
        const double width_floor =
            std::numeric_limits<double>::epsilon() * 64.0 * std::max({std::abs(a), std::abs(b), 1e-300});
        if (b - a <= width_floor) {
            frozen.push_back(s);
        } else {
            active.push(s);
        }
    };

    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        if (breakpoints[i + 1] > breakpoints[i]) push_panel(breakpoints[i], breakpoints[i + 1]);
    }

    auto tolerance = [&] { return std::max(opts.abs_tol, opts.rel_tol * std::abs(total)); };

    while (!active.empty() && total_err > tolerance() && count < opts.max_intervals) {
        Seg worst = active.top();
        active.pop();
        total -= worst.value;
        total_err -= worst.error;
        --count;
        const double mid = 0.5 * (worst.a + worst.b);
        push_panel(worst.a, mid);
        push_panel(mid, worst.b);
    }

    QuadResult<T> out;
    out.value = total;
    out.error = total_err;
    out.intervals = count;
    out.converged = total_err <= tolerance();
    return out;
}

template <typename F, typename T = std::invoke_result_t<F&, double>>
QuadResult<T> integrate(F&& f, double a, double b, const QuadOptions& opts = {}) {
    return integrate_segments(std::forward<F>(f), std::vector<double>{a, b}, opts);
}

// Variant with interior breakpoints (integrand kinks, decay scales) that are
// clamped into (a, b) and deduplicated.
template <typename F, typename T = std::invoke_result_t<F&, double>>
QuadResult<T> integrate_split(F&& f, double a, double b, std::vector<double> splits,
                              const QuadOptions& opts = {}) {
    std::vector<double> pts{a};
    std::sort(splits.begin(), splits.end());
    for (double s : splits) {
        if (s > pts.back() && s < b) pts.push_back(s);
    }
    pts.push_back(b);
    return integrate_segments(std::forward<F>(f), pts, opts);
}

struct TailPolicy {
    double abs_tol = 1e-10;
    double rel_tol = 1e-9;
    double max_horizon = 1e12;
    double first_block = 1.0;
    int max_blocks = 72;
    QuadOptions panel{1e-12, 1e-12, 4000};
};

template <typename T>
struct TailQuadResult {
    T value{};
    double error = 0.0;       // accumulated panel error
    double tail_bound = 0.0;  // heuristic bound on the truncated remainder
    double horizon = 0.0;
    bool converged = false;
};

// Integrates f over [a, infinity) by doubling blocks. Termination requires two
// consecutive blocks whose magnitude falls under the tolerance, guarding
// against a single near-zero block of an oscillatory integrand. The remainder
// bound extrapolates the observed geometric decay of the block magnitudes.
template <typename F, typename T = std::invoke_result_t<F&, double>>
TailQuadResult<T> integrate_to_infinity(F&& f, double a, const TailPolicy& pol = {}) {
    TailQuadResult<T> out;
    double lo = a;
    double len = std::max(pol.first_block, 1e-9);
    double prev_mag = std::numeric_limits<double>::infinity();
    int small_streak = 0;

    for (int k = 0; k < pol.max_blocks && lo < pol.max_horizon; ++k) {
        const double hi = std::min(lo + len, pol.max_horizon);
        auto block = integrate(f, lo, hi, pol.panel);
        out.value += block.value;
        out.error += block.error;
        out.horizon = hi;

        const double mag = std::abs(block.value);
        const double tol = std::max(pol.abs_tol, pol.rel_tol * std::abs(out.value));
        small_streak = (mag <= tol) ? small_streak + 1 : 0;

        double ratio = (prev_mag > 0 && std::isfinite(prev_mag)) ? mag / prev_mag : 1.0;
        ratio = std::clamp(ratio, 0.0, 0.95);
        out.tail_bound = mag * ratio / (1.0 - ratio) + mag;

        if (small_streak >= 2) {
            out.converged = true;
            return out;
        }
        prev_mag = mag;
        lo = hi;
        len *= 2.0;
    }
    out.converged = false;
    return out;
}

}  // namespace pmeq
