#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "errors.hpp"

namespace pmeq {

// Settings for the Euler-accelerated Fourier-series inversion.
struct InversionConfig {
    int series_terms = 40;  // partial sums computed before averaging
    int euler_terms = 14;   // binomial averaging span
    int digits = 10;        // target decimal accuracy; drives the damping parameter

    void validate() const {
        if (series_terms < 10) throw std::invalid_argument("InversionConfig: series_terms must be >= 10");
        if (euler_terms < 8) throw std::invalid_argument("InversionConfig: euler_terms must be >= 8");
        if (digits < 1 || digits > 12)
            throw std::invalid_argument(
                "InversionConfig: digits must be in [1, 12]; double precision cannot support more");
    }
};

// Numeric Laplace transform inversion at t > 0 by the Euler-accelerated
// trapezoidal (Fourier series) method. The transform must be analytic for
// Re(s) > 0 and come from a real-valued original, so F(conj s) = conj F(s)
// and only real parts enter the sum.
//
// With damping A = digits*ln(10) the discretization error is about
// e^{-A} * sup|f|; the binomial average of euler_terms consecutive partial
// sums accelerates the alternating series far below that.
template <typename F>
double ilt(F&& transform, double t, const InversionConfig& cfg = {}) {
    cfg.validate();
    if (!(std::isfinite(t)) || t <= 0.0) throw std::domain_error("ilt: t must be finite and positive");

    constexpr double kPi = 3.14159265358979323846;
    const double A = cfg.digits * std::log(10.0);
    const int m = cfg.series_terms;
    const int e = cfg.euler_terms;
    const int total = m + e;

    std::vector<double> partial(static_cast<std::size_t>(total) + 1);
    double sum = 0.5 * std::real(transform(std::complex<double>(A / (2.0 * t), 0.0)));
    double comp = 0.0;  // Kahan correction
    partial[0] = sum;
    for (int k = 1; k <= total; ++k) {
        const std::complex<double> s(A / (2.0 * t), k * kPi / t);
        const double term = ((k % 2 == 0) ? 1.0 : -1.0) * std::real(transform(s));
        const double y = term - comp;
        const double tmp = sum + y;
        comp = (tmp - sum) - y;
        sum = tmp;
        partial[static_cast<std::size_t>(k)] = sum;
    }

    // Binomial average of partial sums m..m+e.
    double binom = 1.0;
    double avg = 0.0;
    for (int j = 0; j <= e; ++j) {
        avg += binom * partial[static_cast<std::size_t>(m + j)];
        binom = binom * (e - j) / (j + 1.0);
    }
    avg *= std::pow(0.5, e);

    return std::exp(0.5 * A) / t * avg;
}

}  // namespace pmeq
