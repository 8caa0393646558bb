#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "errors.hpp"
#include "quadrature.hpp"

namespace pmeq {

struct LtResult {
    std::complex<double> value{};
    double truncation_bound = 0.0;
    double horizon = 0.0;
    bool converged = false;
};

// Integral_0^inf e^{-st} f(t) dt for a density-like f, by doubling-block
// adaptive quadrature. Works on the real axis (s >= 0) and in the right
// half-plane; the first block is shrunk to the damping/oscillation scale of
// e^{-st} so the panels resolve it from the start.
template <typename F>
LtResult lt_numeric_result(F&& density, std::complex<double> s, TailPolicy pol = {}) {
    if (s.real() < 0.0) throw std::domain_error("lt_numeric: Re(s) must be >= 0");

    double first = 1.0 / (1.0 + std::max(0.0, s.real()));
    if (s.imag() != 0.0) first = std::min(first, 3.0 / std::abs(s.imag()));
    pol.first_block = std::max(first, 1e-8);

    auto integrand = [&](double t) -> std::complex<double> {
        return std::exp(-s * t) * density(t);
    };
    auto res = integrate_to_infinity(integrand, 0.0, pol);

    LtResult out;
    out.value = res.value;
    out.truncation_bound = res.tail_bound;
    out.horizon = res.horizon;
    out.converged = res.converged;
    return out;
}

// Real-axis convenience wrapper; throws when the truncation error estimate
// is still above tolerance at the maximum horizon.
template <typename F>
double lt_numeric(F&& density, double s, const TailPolicy& pol = {}) {
    auto res = lt_numeric_result(std::forward<F>(density), std::complex<double>(s, 0.0), pol);
    if (!res.converged)
        throw numerical_error("lt_numeric: truncation error above tolerance at horizon " +
                              std::to_string(res.horizon));
    return res.value.real();
}

}  // namespace pmeq
