#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "errors.hpp"
#include "extended_real.hpp"
#include "inversion.hpp"
#include "laplace_numeric.hpp"
#include "quadrature.hpp"
#include "service.hpp"
#include "tail_curve.hpp"
#include "transforms.hpp"

namespace pmeq {

// An infinite-server queue: Poisson arrivals at rate lambda, i.i.d. service
// times, no waiting. rho is always recomputed from the service mean.
struct QueueParams {
    double lambda;
    ServiceModel service;

    QueueParams(double lambda_, ServiceModel service_) : lambda(lambda_), service(std::move(service_)) {
        if (!(std::isfinite(lambda) && lambda > 0.0))
            throw std::invalid_argument("QueueParams: lambda must be finite and positive");
    }

    double rho() const { return lambda * service_mean(service); }
};

// M(t) = Integral_0^t tail(v) dv. Closed form for exponential, deterministic
// and Pareto service; for PME service the order of integration swaps to a
// single finite-interval quadrature over the mixing rate.
inline double integrated_service_tail(const QueueParams& q, double t, const QuadOptions& opts = {}) {
    if (!(std::isfinite(t)) || t < 0.0)
        throw std::domain_error("integrated_service_tail: t must be finite and >= 0");
    return std::visit(
        [&](const auto& v) -> double {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, Exponential>) {
                return -std::expm1(-v.rate * t) / v.rate;
            } else if constexpr (std::is_same_v<V, Deterministic>) {
                return std::min(t, v.value);
            } else if constexpr (std::is_same_v<V, ParetoParams>) {
                const double xm = v.scale();
                if (t <= xm) return t;
                return xm + std::pow(xm, v.r) *
                                (std::pow(xm, 1.0 - v.r) - std::pow(t, 1.0 - v.r)) / (v.r - 1.0);
            } else {
                // Integral_0^t H_r = r x_m^r Integral_0^{1/x_m} x^{r-2} (1 - e^{-tx}) dx
                const double b = v.support_end();
                auto integrand = [&](double x) {
                    return std::pow(x, v.r - 2.0) * (-std::expm1(-t * x));
                };
                std::vector<double> splits;
                if (t > 0.0 && 1.0 / t < b) splits.push_back(1.0 / t);
                auto res = integrate_split(integrand, 0.0, b, splits, opts);
                if (!res.converged)
                    throw numerical_error("integrated_service_tail: quadrature did not converge");
                return v.front_factor() * res.value;
            }
        },
        q.service);
}

// Unnormalized density of the time from a busy-period start to the first
// return to an empty system within the transform relation:
//   Psi(t) = lambda (1-G(t)) e^{-lambda M(t)} = -d/dt e^{-lambda M(t)},
// which integrates to 1 - e^{-rho}.
inline double busy_start_density(const QueueParams& q, double t) {
    if (!(std::isfinite(t)) || t < 0.0)
        throw std::domain_error("busy_start_density: t must be finite and >= 0");
    return q.lambda * service_tail(q.service, t) * std::exp(-q.lambda * integrated_service_tail(q, t));
}

// psi(s), the Laplace transform of Psi.
template <typename Scalar>
std::complex<double> busy_start_lt_c(const QueueParams& q, Scalar s, const TailPolicy& pol = {}) {
    auto density = [&](double t) { return busy_start_density(q, t); };
    auto res = lt_numeric_result(density, std::complex<double>(s), pol);
    if (!res.converged)
        throw numerical_error("busy_start_lt: truncation error above tolerance at horizon " +
                              std::to_string(res.horizon));
    return res.value;
}

inline double busy_start_lt(const QueueParams& q, double s, const TailPolicy& pol = {}) {
    if (s < 0.0) throw std::domain_error("busy_start_lt: s must be >= 0");
    return busy_start_lt_c(q, s, pol).real();
}

// Busy-period tail transform u(s), from the algebraic rearrangement of
// psi = lambda u / (lambda u + 1):  u = psi / (lambda (1 - psi)).
// At s = 0: u(0) = (e^rho - 1)/lambda, the mean busy period.
inline std::complex<double> busy_tail_lt_c(const QueueParams& q, std::complex<double> s,
                                           const TailPolicy& pol = {}) {
    const std::complex<double> psi = busy_start_lt_c(q, s, pol);
    const std::complex<double> one_minus = 1.0 - psi;
    if (s.imag() == 0.0 && psi.real() >= 1.0)
        throw numerical_error("busy_tail_lt: psi(s) >= 1 signals quadrature failure upstream");
    return psi / (q.lambda * one_minus);
}

inline double busy_tail_lt(const QueueParams& q, double s, const TailPolicy& pol = {}) {
    if (s < 0.0) throw std::domain_error("busy_tail_lt: s must be >= 0");
    return busy_tail_lt_c(q, std::complex<double>(s, 0.0), pol).real();
}

// Busy-period equilibrium-distribution transform u(s)/u(0). The normalizer
// u(0) needs a quadrature of the slowly decaying Psi tail (for a power tail
// t^-p the blocks shrink only like V^{1-p}), so it runs at a relaxed
// tolerance and an extended horizon.
inline double busy_equilibrium_lt(const QueueParams& q, double s) {
    if (s < 0.0) throw std::domain_error("busy_equilibrium_lt: s must be >= 0");
    TailPolicy relaxed;
    relaxed.abs_tol = 1e-7;
    relaxed.rel_tol = 1e-6;
    relaxed.max_horizon = 4e12;
    const double u0 = busy_tail_lt(q, 0.0, relaxed);
    if (s == 0.0) return 1.0;
    return busy_tail_lt(q, s, relaxed) / u0;
}

struct InvertedTail {
    TailCurve curve;
    double max_excursion = 0.0;  // worst out-of-[0,1] magnitude before clamping
};

// Busy-period tail U(t) on the given positive grid, by numeric inversion of
// u(s) point by point. A leading (0, 1) point is prepended; inverted values
// are clamped to [0, 1] with the pre-clamp excursion reported.
inline InvertedTail busy_tail(const QueueParams& q, const std::vector<double>& grid,
                              const InversionConfig& cfg = {}, const TailPolicy& pol = {}) {
    if (grid.empty()) throw std::invalid_argument("busy_tail: empty grid");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0)) throw std::invalid_argument("busy_tail: grid must be strictly positive");
        if (i > 0 && !(grid[i] > grid[i - 1]))
            throw std::invalid_argument("busy_tail: grid must increase strictly");
    }
    auto transform = [&](std::complex<double> s) { return busy_tail_lt_c(q, s, pol); };

    std::vector<double> g{0.0};
    std::vector<double> vals{1.0};
    double excursion = 0.0;
    for (double t : grid) {
        double u = ilt(transform, t, cfg);
        excursion = std::max({excursion, -u, u - 1.0});
        vals.push_back(std::clamp(u, 0.0, 1.0));
        g.push_back(t);
    }
    return {TailCurve(std::move(g), std::move(vals)), std::max(excursion, 0.0)};
}

struct BusyMomentResult {
    ExtendedReal value;            // Integral_0^inf t^n Psi(t) dt, or +inf
    double tail_bound = 0.0;       // truncation estimate when finite
    std::vector<double> truncated; // running truncated values at doubling horizons
};

// Moment of the unnormalized busy-start density: Integral t^n Psi(t) dt,
// which equals (-1)^n times the n-th derivative at 0 of
// lambda u/(lambda u + 1). Computed by direct doubling quadrature; sustained
// non-decaying block contributions classify the integral as divergent. The
// block-ratio threshold 0.75 separates tails t^{-p} with p <= 1.4 (treated
// as divergent or near-divergent) from cleanly integrable ones.
inline BusyMomentResult busy_moment_from_transform(const QueueParams& q, int n, double t0 = 8.0,
                                                   double rel_tol = 1e-8) {
    if (n < 0) throw std::domain_error("busy_moment_from_transform: n must be >= 0");
    auto integrand = [&](double t) { return std::pow(t, n) * busy_start_density(q, t); };

    BusyMomentResult out{ExtendedReal::finite(0.0), 0.0, {}};
    double acc = 0.0;
    double lo = 0.0, hi = t0;
    double prev_block = -1.0;
    int small_streak = 0, grow_streak = 0;
    const QuadOptions panel{1e-12, 1e-10, 4000};

    for (int k = 0; k < 44; ++k) {
        auto block = integrate(integrand, lo, hi, panel);
        acc += block.value;
        out.truncated.push_back(acc);

        const double tol = std::max(1e-13, rel_tol * std::abs(acc));
        small_streak = (std::abs(block.value) <= tol) ? small_streak + 1 : 0;
        if (prev_block > 0.0 && block.value >= 0.75 * prev_block) {
            ++grow_streak;
        } else {
            grow_streak = 0;
        }
        if (k >= 3 && grow_streak >= 3) {
            out.value = ExtendedReal::pos_inf();
            out.tail_bound = 0.0;
            return out;
        }
        if (small_streak >= 2) {
            double ratio = prev_block > 0.0 ? std::clamp(block.value / prev_block, 0.0, 0.9) : 0.5;
            out.value = ExtendedReal::finite(acc);
            out.tail_bound = std::abs(block.value) * ratio / (1.0 - ratio) + std::abs(block.value);
            return out;
        }
        prev_block = block.value;
        lo = hi;
        hi *= 2.0;
    }
    throw numerical_error("busy_moment_from_transform: no convergence or divergence verdict at horizon");
}

struct RecoveryResult {
    TailCurve service_tail;   // recovered 1 - G(t) on the grid, clamped to [0,1]
    double implied_alpha;     // trapezoid integral of the recovered tail
    double max_excursion;     // worst out-of-[0,1] magnitude before clamping
};

// Service recovery from a busy-period transform. Given
// phi(s) = lambda u(s) / (lambda u(s) + 1), the original of phi is
// Psi(t) = lambda (1-G(t)) e^{-lambda M(t)} with cumulative
// F(t) = 1 - e^{-lambda M(t)}, so the service tail follows pointwise:
//   f = invert(phi),  F = Integral_0^t f,  1 - G = f / (lambda (1 - F)).
// f(0+) = lambda exactly (G(0) = 0), which anchors the leading panel.
template <typename Phi>
RecoveryResult recover_service_from_busy_lt(Phi&& phi, double lambda, const std::vector<double>& grid,
                                            const InversionConfig& cfg = {}) {
    if (!(std::isfinite(lambda) && lambda > 0.0))
        throw std::invalid_argument("recover_service: lambda must be finite and positive");
    if (grid.empty()) throw std::invalid_argument("recover_service: empty grid");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0)) throw std::invalid_argument("recover_service: grid must be strictly positive");
        if (i > 0 && !(grid[i] > grid[i - 1]))
            throw std::invalid_argument("recover_service: grid must increase strictly");
    }

    std::vector<double> g{0.0};
    g.insert(g.end(), grid.begin(), grid.end());

    std::vector<double> f(g.size());
    f[0] = lambda;
    for (std::size_t i = 1; i < g.size(); ++i) f[i] = ilt(phi, g[i], cfg);

    std::vector<double> tail(g.size());
    tail[0] = 1.0;
    double excursion = 0.0;
    double cum = 0.0;  // F(t), cumulative trapezoid of f
    for (std::size_t i = 1; i < g.size(); ++i) {
        cum += 0.5 * (f[i - 1] + f[i]) * (g[i] - g[i - 1]);
        const double remaining = 1.0 - cum;
        if (remaining < 1e-9)
            throw numerical_error("recover_service: cumulative F reached 1 before the horizon (inversion noise)");
        const double value = f[i] / (lambda * remaining);
        excursion = std::max({excursion, -value, value - 1.0});
        tail[i] = std::clamp(value, 0.0, 1.0);
    }
    if (excursion > 5e-2)
        throw numerical_error("recover_service: recovered tail left [0,1] by more than 5e-2");

    TailCurve curve(std::move(g), std::move(tail));
    const double alpha = curve.integral();
    return {std::move(curve), alpha, std::max(excursion, 0.0)};
}

// Recovery under the hypothesis that the busy period itself is PME(r): the
// busy-tail transform is the PME tail transform, so
// phi(s) = lambda h_r(s) / (lambda h_r(s) + 1). Since h_r(0) = 1, the
// implied traffic intensity is rho = ln(1 + lambda) and the recovered mean
// is ln(1 + lambda)/lambda regardless of r.
inline RecoveryResult recover_service_from_pme_busy(double r, double lambda,
                                                    const std::vector<double>& grid,
                                                    const InversionConfig& cfg = {}) {
    static_cast<void>(PmeParams(r));  // validate r before any inversion work
    auto phi = [=](std::complex<double> s) {
        const std::complex<double> h = pme_tail_lt_complex(r, s);
        return lambda * h / (lambda * h + 1.0);
    };
    return recover_service_from_busy_lt(phi, lambda, grid, cfg);
}

// Busy-period tail transform when the service tail is known only as a
// sampled curve (for example a recovered one). The curve is treated as
// piecewise linear with no mass beyond its grid, so the result is accurate
// when e^{-s T_end} is negligible.
inline double busy_tail_lt_from_curve(const TailCurve& service_tail, double lambda, double s) {
    if (!(std::isfinite(lambda) && lambda > 0.0))
        throw std::invalid_argument("busy_tail_lt_from_curve: lambda must be positive");
    if (!(s > 0.0)) throw std::domain_error("busy_tail_lt_from_curve: s must be positive");
    const auto& g = service_tail.grid;
    const auto& v = service_tail.values;
    double psi = 0.0;
    double m_acc = 0.0;  // running integral of the tail up to the segment start
    for (std::size_t i = 0; i + 1 < g.size(); ++i) {
        const double a = g[i], b = g[i + 1];
        const double slope = (v[i + 1] - v[i]) / (b - a);
        auto integrand = [&](double t) {
            const double tail_t = v[i] + slope * (t - a);
            const double m_t = m_acc + 0.5 * (v[i] + tail_t) * (t - a);
            return std::exp(-s * t) * lambda * tail_t * std::exp(-lambda * m_t);
        };
        psi += integrate(integrand, a, b, QuadOptions{1e-13, 1e-11, 200}).value;
        m_acc += 0.5 * (v[i] + v[i + 1]) * (b - a);
    }
    if (psi >= 1.0) throw numerical_error("busy_tail_lt_from_curve: psi >= 1 signals a bad curve");
    return psi / (lambda * (1.0 - psi));
}

// Truncated moment of the service equilibrium density (1-G(t))/alpha, from a
// sampled tail curve with the mean supplied by the producer.
inline double equilibrium_tail_moment(const TailCurve& tail, int n, double upto, double alpha) {
    if (!(std::isfinite(alpha) && alpha > 0.0))
        throw std::invalid_argument("equilibrium_tail_moment: alpha must be positive");
    return tail.weighted_integral(n, upto) / alpha;
}

// Same moment for an analytic service model, by blockwise quadrature with
// panel breaks at the tail kink.
inline double equilibrium_tail_moment(const ServiceModel& m, int n, double upto,
                                      const QuadOptions& opts = {}) {
    if (n < 0) throw std::domain_error("equilibrium_tail_moment: n must be >= 0");
    if (!(upto > 0.0)) return 0.0;
    auto integrand = [&](double t) { return std::pow(t, n) * service_tail(m, t); };

    std::vector<double> pts{0.0};
    const double kink = service_tail_kink(m);
    if (kink > 0.0 && kink < upto) pts.push_back(kink);
    for (double edge = 1.0; edge < upto; edge *= 2.0) {
        if (edge > pts.back()) pts.push_back(edge);
    }
    pts.push_back(upto);

    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        auto res = integrate(integrand, pts[i], pts[i + 1], opts);
        if (!res.converged) throw numerical_error("equilibrium_tail_moment: quadrature did not converge");
        acc += res.value;
    }
    return acc / service_mean(m);
}

enum class TailClass { finite, divergent, inconclusive };

inline const char* to_string(TailClass c) {
    switch (c) {
        case TailClass::finite: return "finite";
        case TailClass::divergent: return "divergent";
        default: return "inconclusive";
    }
}

// Classifies truncated moments at horizons T, 2T, 4T, 8T: divergent when
// every successive ratio is >= 1.1, finite when the last ratio is <= 1.01,
// inconclusive otherwise.
inline TailClass divergence_diagnostic(const std::array<double, 4>& m) {
    for (double v : m) {
        if (!(std::isfinite(v) && v > 0.0)) return TailClass::inconclusive;
    }
    const double r1 = m[1] / m[0], r2 = m[2] / m[1], r3 = m[3] / m[2];
    if (r1 >= 1.1 && r2 >= 1.1 && r3 >= 1.1) return TailClass::divergent;
    if (r3 <= 1.01) return TailClass::finite;
    return TailClass::inconclusive;
}

}  // namespace pmeq
