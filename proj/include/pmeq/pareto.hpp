#pragma once

#include <cmath>
#include <stdexcept>

#include "rng.hpp"

namespace pmeq {

// Pareto distribution with shape r > 1 and scale fixed at x_m = (r-1)/r.
// That scale choice pins the mean to exactly 1: r*x_m/(r-1) = 1.
struct ParetoParams {
    double r;

    explicit ParetoParams(double shape) : r(shape) {
        if (!(std::isfinite(r) && r > 1.0))
            throw std::invalid_argument("ParetoParams: shape r must be finite and exceed 1");
    }

    double scale() const { return (r - 1.0) / r; }  // x_m, in (0, 1)
    double mean() const { return 1.0; }
};

inline double pareto_pdf(const ParetoParams& p, double x) {
    if (!std::isfinite(x)) throw std::domain_error("pareto_pdf: x must be finite");
    const double xm = p.scale();
    if (x < xm) return 0.0;
    return p.r * std::pow(xm, p.r) * std::pow(x, -(p.r + 1.0));
}

inline double pareto_tail(const ParetoParams& p, double x) {
    const double xm = p.scale();
    if (x <= xm) return 1.0;
    return std::pow(xm / x, p.r);
}

inline double pareto_cdf(const ParetoParams& p, double x) { return 1.0 - pareto_tail(p, x); }

// Inverse-CDF draw: x_m * U^{-1/r}.
inline double pareto_sample(const ParetoParams& p, RngStream& rng) {
    return p.scale() * std::pow(rng.uniform01(), -1.0 / p.r);
}

}  // namespace pmeq
