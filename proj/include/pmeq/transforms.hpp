#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "errors.hpp"
#include "extended_real.hpp"
#include "pme.hpp"
#include "quadrature.hpp"

namespace pmeq {

// A Laplace transform evaluated at a real point s >= 0. The value is an
// extended real so diverging derivative limits stay pattern-matchable.
struct TransformValue {
    double s;
    ExtendedReal value;
};

namespace detail {

// The integrands x^p / (s+x)^q have an integrable kink near x ~ |s| when s
// is small; splitting there keeps the adaptive refinement shallow.
inline std::vector<double> transform_splits(double s_mag, double b) {
    std::vector<double> splits;
    const double split = std::max(s_mag, 1e-6);
    if (split < b) splits.push_back(split);
    return splits;
}

template <typename Scalar>
Scalar pme_lt_impl(const PmeParams& p, Scalar s, const QuadOptions& opts) {
    const double b = p.support_end();
    auto integrand = [&](double x) -> Scalar { return std::pow(x, p.r) / (s + x); };
    auto res = integrate_split(integrand, 0.0, b, transform_splits(std::abs(s), b), opts);
    if (!res.converged) throw numerical_error("pme_lt: quadrature did not converge");
    return p.front_factor() * res.value;
}

template <typename Scalar>
Scalar pme_tail_lt_impl(const PmeParams& p, Scalar s, const QuadOptions& opts) {
    const double b = p.support_end();
    auto integrand = [&](double x) -> Scalar { return std::pow(x, p.r - 1.0) / (s + x); };
    auto res = integrate_split(integrand, 0.0, b, transform_splits(std::abs(s), b), opts);
    if (!res.converged) throw numerical_error("pme_tail_lt: quadrature did not converge");
    return p.front_factor() * res.value;
}

}  // namespace detail

// Density transform: r x_m^r * Integral_0^{1/x_m} x^r/(s+x) dx, equal to 1 at s = 0.
inline TransformValue pme_lt(double r, double s, const QuadOptions& opts = {}) {
    if (!(std::isfinite(s)) || s < 0.0) throw std::domain_error("pme_lt: s must be finite and >= 0");
    const PmeParams p(r);
    return {s, ExtendedReal::finite(detail::pme_lt_impl<double>(p, s, opts))};
}

// Tail transform: r x_m^r * Integral_0^{1/x_m} x^{r-1}/(s+x) dx
// = (1 - density transform)/s for s > 0, and 1 at s = 0.
inline TransformValue pme_tail_lt(double r, double s, const QuadOptions& opts = {}) {
    if (!(std::isfinite(s)) || s < 0.0) throw std::domain_error("pme_tail_lt: s must be finite and >= 0");
    const PmeParams p(r);
    return {s, ExtendedReal::finite(detail::pme_tail_lt_impl<double>(p, s, opts))};
}

// Analytic continuations used by the numeric inversion engine; valid for
// Re(s) > 0 where the integrand denominator never vanishes.
inline std::complex<double> pme_lt_complex(double r, std::complex<double> s,
                                           const QuadOptions& opts = {1e-12, 1e-12, 4000}) {
    return detail::pme_lt_impl<std::complex<double>>(PmeParams(r), s, opts);
}

inline std::complex<double> pme_tail_lt_complex(double r, std::complex<double> s,
                                                const QuadOptions& opts = {1e-12, 1e-12, 4000}) {
    return detail::pme_tail_lt_impl<std::complex<double>>(PmeParams(r), s, opts);
}

// n-th derivative of the tail transform at s > 0:
// (-1)^n n! r x_m^r * Integral_0^{1/x_m} x^{r-1}/(s+x)^{n+1} dx.
inline TransformValue pme_tail_lt_deriv(double r, double s, int n, const QuadOptions& opts = {}) {
    if (n < 0) throw std::domain_error("pme_tail_lt_deriv: n must be >= 0");
    if (!(std::isfinite(s)) || s <= 0.0)
        throw std::domain_error("pme_tail_lt_deriv: s must be positive; use pme_tail_lt_deriv_at_zero for s = 0");
    const PmeParams p(r);
    const double b = p.support_end();
    auto integrand = [&](double x) { return std::pow(x, p.r - 1.0) / std::pow(s + x, n + 1.0); };
    auto res = integrate_split(integrand, 0.0, b, detail::transform_splits(s, b), opts);
    if (!res.converged) throw numerical_error("pme_tail_lt_deriv: quadrature did not converge");
    double factorial = 1.0;
    for (int i = 2; i <= n; ++i) factorial *= i;
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    return {s, ExtendedReal::finite(sign * factorial * p.front_factor() * res.value)};
}

// Limit of the n-th tail-transform derivative as s -> 0+. Finite for
// n < r-1:
//   (-1)^n n! r x_m^r (1/x_m)^{r-(n+1)} / (r-(n+1)),
// and a signed infinity for n >= r-1 (the defining integral of x^{r-n-2}
// diverges at the origin, including the logarithmic case n = r-1). The
// magnitude diverges to +infinity, so the sign of the indicator is the
// alternating (-1)^n of the derivative itself.
inline TransformValue pme_tail_lt_deriv_at_zero(double r, int n) {
    if (n < 0) throw std::domain_error("pme_tail_lt_deriv_at_zero: n must be >= 0");
    const PmeParams p(r);
    const bool odd = (n % 2 == 1);
    if (static_cast<double>(n) >= r - 1.0) {
        return {0.0, odd ? ExtendedReal::neg_inf() : ExtendedReal::pos_inf()};
    }
    double factorial = 1.0;
    for (int i = 2; i <= n; ++i) factorial *= i;
    const double magnitude = factorial * p.front_factor() *
                             std::pow(p.support_end(), p.r - (n + 1.0)) / (p.r - (n + 1.0));
    return {0.0, ExtendedReal::finite(odd ? -magnitude : magnitude)};
}

}  // namespace pmeq
