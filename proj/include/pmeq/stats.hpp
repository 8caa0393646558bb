#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace pmeq {

inline double sample_mean(const std::vector<double>& xs) {
    if (xs.empty()) throw std::invalid_argument("sample_mean: empty sample");
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

inline double sample_variance(const std::vector<double>& xs) {
    if (xs.size() < 2) throw std::invalid_argument("sample_variance: need at least 2 points");
    const double m = sample_mean(xs);
    double s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return s / static_cast<double>(xs.size() - 1);
}

inline double sample_stderr(const std::vector<double>& xs) {
    return std::sqrt(sample_variance(xs) / static_cast<double>(xs.size()));
}

// Kolmogorov-Smirnov statistic of a sample against a CDF.
inline double ks_statistic(std::vector<double> xs, const std::function<double(double)>& cdf) {
    if (xs.empty()) throw std::invalid_argument("ks_statistic: empty sample");
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double c = cdf(xs[i]);
        d = std::max(d, std::abs((i + 1) / n - c));
        d = std::max(d, std::abs(i / n - c));
    }
    return d;
}

// Asymptotic critical value at the 1% significance level.
inline double ks_critical_1pct(std::size_t n) {
    return 1.62762 / std::sqrt(static_cast<double>(n));
}

}  // namespace pmeq
