#pragma once

#include <cmath>
#include <stdexcept>
#include <variant>

#include "pareto.hpp"
#include "pme.hpp"
#include "rng.hpp"

namespace pmeq {

struct Exponential {
    double rate;
    explicit Exponential(double rate_) : rate(rate_) {
        if (!(std::isfinite(rate) && rate > 0.0))
            throw std::invalid_argument("Exponential: rate must be finite and positive");
    }
};

struct Deterministic {
    double value;
    explicit Deterministic(double value_) : value(value_) {
        if (!(std::isfinite(value) && value > 0.0))
            throw std::invalid_argument("Deterministic: value must be finite and positive");
    }
};

// Service-time distribution: exponential, deterministic, Pareto or PME.
// Every variant has a finite positive mean; tails start at 1 and decrease.
using ServiceModel = std::variant<Exponential, Deterministic, ParetoParams, PmeParams>;

inline double service_tail(const ServiceModel& m, double t) {
    if (!(std::isfinite(t)) || t < 0.0) throw std::domain_error("service_tail: t must be finite and >= 0");
    return std::visit(
        [&](const auto& v) -> double {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, Exponential>) return std::exp(-v.rate * t);
            else if constexpr (std::is_same_v<V, Deterministic>) return t < v.value ? 1.0 : 0.0;
            else if constexpr (std::is_same_v<V, ParetoParams>) return pareto_tail(v, t);
            else return pme_tail(v, t);
        },
        m);
}

inline double service_mean(const ServiceModel& m) {
    return std::visit(
        [](const auto& v) -> double {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, Exponential>) return 1.0 / v.rate;
            else if constexpr (std::is_same_v<V, Deterministic>) return v.value;
            else return 1.0;  // Pareto and PME have unit mean by construction
        },
        m);
}

inline bool service_has_density(const ServiceModel& m) {
    return !std::holds_alternative<Deterministic>(m);
}

inline double service_density(const ServiceModel& m, double t) {
    if (!(std::isfinite(t)) || t < 0.0) throw std::domain_error("service_density: t must be finite and >= 0");
    return std::visit(
        [&](const auto& v) -> double {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, Exponential>) return v.rate * std::exp(-v.rate * t);
            else if constexpr (std::is_same_v<V, Deterministic>) {
                throw std::domain_error("service_density: deterministic service is a point mass");
                return 0.0;
            } else if constexpr (std::is_same_v<V, ParetoParams>) return pareto_pdf(v, t);
            else return pme_pdf(v, t);
        },
        m);
}

inline double service_sample(const ServiceModel& m, RngStream& rng) {
    return std::visit(
        [&](const auto& v) -> double {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, Exponential>) return rng.exponential(v.rate);
            else if constexpr (std::is_same_v<V, Deterministic>) return v.value;
            else if constexpr (std::is_same_v<V, ParetoParams>) return pareto_sample(v, rng);
            else return pme_sample(v, rng);
        },
        m);
}

// Time beyond which the tail is numerically negligible; used by quadrature
// breakpoints. Exact for deterministic, heuristic elsewhere.
inline double service_tail_kink(const ServiceModel& m) {
    return std::visit(
        [](const auto& v) -> double {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, Deterministic>) return v.value;
            else if constexpr (std::is_same_v<V, ParetoParams>) return v.scale();
            else return 0.0;
        },
        m);
}

}  // namespace pmeq
