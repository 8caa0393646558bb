#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "errors.hpp"
#include "extended_real.hpp"
#include "pareto.hpp"
#include "quadrature.hpp"
#include "rng.hpp"

namespace pmeq {

// PME: an exponential distribution whose mean is itself Pareto distributed
// with shape r > 1 and scale (r-1)/r. The mixture has unit mean and a
// power tail of index r, so moments of order >= r diverge.
struct PmeParams {
    double r;

    explicit PmeParams(double shape) : r(shape) {
        if (!(std::isfinite(r) && r > 1.0))
            throw std::invalid_argument("PmeParams: shape r must be finite and exceed 1");
    }

    double scale() const { return (r - 1.0) / r; }       // x_m of the mixing Pareto
    double support_end() const { return r / (r - 1.0); }  // 1/x_m, the rate-domain endpoint
    double front_factor() const { return r * std::pow(scale(), r); }
};

namespace detail {

// Substituting x = 1/y turns the Pareto mixture over means y in [x_m, inf)
// into a finite-interval integral over rates x in [0, 1/x_m]. When t is
// large the factor e^{-tx} confines the mass to x <~ 50/t, so that point is
// added as a panel break to keep the outer panels from missing it.
inline std::vector<double> pme_decay_splits(double t, double b) {
    std::vector<double> splits;
    if (t > 0.0 && 50.0 / t < b) {
        splits.push_back(50.0 / t);
        if (5.0 / t < b) splits.push_back(5.0 / t);
    }
    return splits;
}

}  // namespace detail

// Density g_r(t) = r x_m^r * Integral_0^{1/x_m} x^r e^{-tx} dx.
inline double pme_pdf(const PmeParams& p, double t, const QuadOptions& opts = {}) {
    if (!(std::isfinite(t)) || t < 0.0) throw std::domain_error("pme_pdf: t must be finite and >= 0");
    const double b = p.support_end();
    auto integrand = [&](double x) { return std::pow(x, p.r) * std::exp(-t * x); };
    auto res = integrate_split(integrand, 0.0, b, detail::pme_decay_splits(t, b), opts);
    if (!res.converged) throw numerical_error("pme_pdf: quadrature did not converge");
    return p.front_factor() * res.value;
}

// Tail H_r(t) = r x_m^r * Integral_0^{1/x_m} x^{r-1} e^{-tx} dx; H_r(0) = 1.
inline double pme_tail(const PmeParams& p, double t, const QuadOptions& opts = {}) {
    if (!(std::isfinite(t)) || t < 0.0) throw std::domain_error("pme_tail: t must be finite and >= 0");
    const double b = p.support_end();
    auto integrand = [&](double x) { return std::pow(x, p.r - 1.0) * std::exp(-t * x); };
    auto res = integrate_split(integrand, 0.0, b, detail::pme_decay_splits(t, b), opts);
    if (!res.converged) throw numerical_error("pme_tail: quadrature did not converge");
    return p.front_factor() * res.value;
}

inline double pme_cdf(const PmeParams& p, double t, const QuadOptions& opts = {}) {
    return 1.0 - pme_tail(p, t, opts);
}

// n-th raw moment: n! * r/(r-n) * x_m^n for n < r, infinite for n >= r.
inline ExtendedReal pme_moment(const PmeParams& p, int n) {
    if (n < 1) throw std::domain_error("pme_moment: order n must be >= 1");
    if (static_cast<double>(n) >= p.r) return ExtendedReal::pos_inf();
    double factorial = 1.0;
    for (int i = 2; i <= n; ++i) factorial *= i;
    return ExtendedReal::finite(factorial * (p.r / (p.r - n)) * std::pow(p.scale(), n));
}

// Mixture draw: a Pareto mean Y, then an exponential with mean Y.
inline double pme_sample(const PmeParams& p, RngStream& rng) {
    const double y = p.scale() * std::pow(rng.uniform01(), -1.0 / p.r);
    return -y * std::log(rng.uniform01());
}

}  // namespace pmeq
