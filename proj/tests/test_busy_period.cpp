#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include <pmeq/busy_period.hpp>
#include <pmeq/tail_curve.hpp>

#include "oracles.hpp"

using namespace pmeq;

namespace {

QueueParams make_queue(double lambda, ServiceModel m) { return QueueParams(lambda, std::move(m)); }

}  // namespace

TEST_CASE("queue parameters recompute rho from the service mean") {
    QueueParams q(2.0, ServiceModel{Exponential(4.0)});
    CHECK(q.rho() == doctest::Approx(0.5));
    CHECK_THROWS_AS(QueueParams(0.0, ServiceModel{Exponential(1.0)}), std::invalid_argument);
}

TEST_CASE("integrated service tail per variant") {
    QueueParams det = make_queue(1.0, ServiceModel{Deterministic(1.0)});
    CHECK(integrated_service_tail(det, 0.5) == doctest::Approx(0.5));
    CHECK(integrated_service_tail(det, 3.0) == doctest::Approx(1.0));

    QueueParams exp1 = make_queue(1.0, ServiceModel{Exponential(1.0)});
    for (double t : {0.1, 1.0, 4.0}) {
        CHECK(integrated_service_tail(exp1, t) == doctest::Approx(1.0 - std::exp(-t)).epsilon(1e-12));
    }

    QueueParams par = make_queue(1.0, ServiceModel{ParetoParams(2.0)});
    const double ref = oracle::simpson([&](double v) { return pareto_tail(ParetoParams(2.0), v); },
                                       0.0, 3.0, 4000);
    CHECK(integrated_service_tail(par, 3.0) == doctest::Approx(ref).epsilon(1e-9));

    QueueParams pme = make_queue(1.0, ServiceModel{PmeParams(2.0)});
    CHECK(integrated_service_tail(pme, 1e6) == doctest::Approx(1.0).epsilon(1e-4));
    const double ref2 = oracle::simpson([&](double v) { return pme_tail(PmeParams(2.0), v); },
                                        0.0, 2.0, 2000);
    CHECK(integrated_service_tail(pme, 2.0) == doctest::Approx(ref2).epsilon(1e-8));
    CHECK(integrated_service_tail(pme, 0.0) == doctest::Approx(0.0));
}

TEST_CASE("busy-start density and its total mass 1 - e^{-rho}") {
    QueueParams exp1 = make_queue(1.0, ServiceModel{Exponential(1.0)});
    CHECK(busy_start_density(exp1, 0.0) == doctest::Approx(1.0));

    // the density is the exact derivative of 1 - e^{-lambda M(t)}; stop just
    // inside the deterministic support to keep the oracle off the jump
    QueueParams det = make_queue(1.0, ServiceModel{Deterministic(1.0)});
    const double upto = 1.0 - 1e-9;
    const double mass_det = oracle::simpson([&](double t) { return busy_start_density(det, t); },
                                            0.0, upto, 4000);
    CHECK(mass_det == doctest::Approx(1.0 - std::exp(-upto)).epsilon(1e-9));
    CHECK(busy_start_lt(det, 0.0) == doctest::Approx(oracle::kOneMinusExpNeg1).epsilon(1e-8));

    QueueParams pme2 = make_queue(1.0, ServiceModel{PmeParams(2.0)});
    CHECK(busy_start_lt(pme2, 0.0) == doctest::Approx(oracle::kOneMinusExpNeg1).epsilon(1e-6));
}

TEST_CASE("psi(0) = 1 - e^{-rho} across lambdas and service variants") {
    const std::vector<ServiceModel> models{
        ServiceModel{Exponential(1.0)}, ServiceModel{Deterministic(1.0)},
        ServiceModel{ParetoParams(3.0)}, ServiceModel{PmeParams(3.0)}};
    for (double lambda : {0.5, 1.0, 2.0}) {
        for (const auto& m : models) {
            QueueParams q(lambda, m);
            CHECK(std::abs(busy_start_lt(q, 0.0) - (1.0 - std::exp(-q.rho()))) < 1e-8);
        }
    }
}

TEST_CASE("busy-period mean identity lambda u(0) = e^rho - 1") {
    const std::vector<ServiceModel> models{
        ServiceModel{Exponential(1.0)}, ServiceModel{Deterministic(1.0)},
        ServiceModel{ParetoParams(3.0)}, ServiceModel{PmeParams(3.0)}};
    for (const auto& m : models) {
        QueueParams q(1.0, m);
        CHECK(std::abs(1.0 * busy_tail_lt(q, 0.0) - oracle::kEMinus1) < 1e-6);
    }
    QueueParams q2(2.0, ServiceModel{Exponential(1.0)});
    CHECK(2.0 * busy_tail_lt(q2, 0.0) == doctest::Approx(std::exp(2.0) - 1.0).epsilon(1e-8));
}

TEST_CASE("busy tail transform decays and re-transforms the inverted tail") {
    QueueParams q = make_queue(1.0, ServiceModel{Exponential(1.0)});
    CHECK(busy_tail_lt(q, 50.0) < 0.02);
    CHECK(busy_tail_lt(q, 5.0) < busy_tail_lt(q, 1.0));
    CHECK_THROWS_AS(busy_tail_lt(q, -1.0), std::domain_error);

    // u(1) equals the numeric transform of the inverted tail curve
    auto inverted = busy_tail(q, logspace(1e-3, 30.0, 160));
    const double u1_from_curve = oracle::simpson(
        [&](double t) { return std::exp(-t) * inverted.curve.value_at(t); }, 0.0, 30.0, 4000);
    CHECK(u1_from_curve == doctest::Approx(busy_tail_lt(q, 1.0)).epsilon(1e-3));
}

TEST_CASE("inverted busy tail: shape, excursion, integral identity") {
    QueueParams q = make_queue(1.0, ServiceModel{Exponential(1.0)});
    auto grid = logspace(2e-2, 50.0, 80);
    auto res = busy_tail(q, grid);
    CHECK(res.max_excursion < 5e-2);

    CHECK(res.curve.values[1] == doctest::Approx(1.0).epsilon(2e-2));  // U -> 1 as t -> 0+

    double prev = 1.0 + 1e-9;
    for (double v : res.curve.values) {
        CHECK(v <= prev + 1e-3);  // non-increasing within inversion noise
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        prev = v;
    }

    const double integral = res.curve.integral();
    CHECK(integral == doctest::Approx(busy_tail_lt(q, 0.0)).epsilon(0.02));
}

TEST_CASE("deterministic service keeps the busy tail at 1 for t below one service") {
    QueueParams q = make_queue(1.0, ServiceModel{Deterministic(1.0)});
    auto res = busy_tail(q, std::vector<double>{0.2, 0.5, 0.8});
    for (std::size_t i = 1; i < res.curve.values.size(); ++i) {
        CHECK(res.curve.values[i] == doctest::Approx(1.0).epsilon(1e-2));
    }
}

TEST_CASE("busy moments from the transform relation") {
    QueueParams exp1 = make_queue(1.0, ServiceModel{Exponential(1.0)});
    auto m0 = busy_moment_from_transform(exp1, 0);
    CHECK(m0.value.is_finite());
    CHECK(m0.value.value() == doctest::Approx(oracle::kOneMinusExpNeg1).epsilon(1e-7));

    QueueParams det = make_queue(0.5, ServiceModel{Deterministic(1.0)});
    auto m0d = busy_moment_from_transform(det, 0);
    CHECK(m0d.value.value() == doctest::Approx(1.0 - std::exp(-0.5)).epsilon(1e-7));

    // positivity witness: finite moments of a nonnegative density stay >= 0
    for (int n = 0; n <= 4; ++n) {
        auto m = busy_moment_from_transform(exp1, n);
        CHECK(m.value.is_finite());
        CHECK(m.value.value() >= 0.0);
    }

    // infinite-variance service: the second moment diverges
    QueueParams heavy = make_queue(1.0, ServiceModel{PmeParams(1.5)});
    auto m2 = busy_moment_from_transform(heavy, 2);
    CHECK(m2.value.is_pos_inf());
    CHECK(m2.truncated.size() >= 4);
}

TEST_CASE("recovery reproduces an exponential service tail (ground truth)") {
    QueueParams q = make_queue(1.0, ServiceModel{Exponential(1.0)});
    auto phi = [&](std::complex<double> s) { return busy_start_lt_c(q, s); };

    auto grid = logspace(1e-3, 6.0, 120);
    auto rec = recover_service_from_busy_lt(phi, 1.0, grid);
    CHECK(rec.max_excursion < 5e-2);

    double sup = 0.0;
    for (std::size_t i = 0; i < rec.service_tail.grid.size(); ++i) {
        const double t = rec.service_tail.grid[i];
        if (t < 0.05 || t > 5.0) continue;
        sup = std::max(sup, std::abs(rec.service_tail.values[i] - std::exp(-t)));
    }
    CHECK(sup < 1e-2);
}

TEST_CASE("recovery from a PME busy period") {
    auto grid = logspace(1e-3, 200.0, 300);
    auto rec = recover_service_from_pme_busy(2.0, 1.0, grid);

    CHECK(rec.implied_alpha == doctest::Approx(oracle::kLn2).epsilon(0.02));
    CHECK(rec.service_tail.values[0] == 1.0);
    CHECK(rec.service_tail.values[1] == doctest::Approx(1.0).epsilon(5e-3));  // tail -> 1 as t -> 0+
    CHECK(rec.max_excursion < 5e-2);

    // forward-inverse consistency: the recovered service regenerates the
    // PME busy-tail transform
    for (double s : {0.5, 1.0, 2.0}) {
        const double u_round = busy_tail_lt_from_curve(rec.service_tail, 1.0, s);
        const double u_direct = pme_tail_lt(2.0, s).value.value();
        CHECK(std::abs(u_round - u_direct) < 1e-2);
    }

    CHECK_THROWS_AS(recover_service_from_pme_busy(0.9, 1.0, grid), std::invalid_argument);
    CHECK_THROWS_AS(recover_service_from_pme_busy(2.0, 1.0, std::vector<double>{-1.0, 2.0}),
                    std::invalid_argument);
}

TEST_CASE("equilibrium moments for analytic service models") {
    ServiceModel exp1{Exponential(1.0)};
    CHECK(equilibrium_tail_moment(exp1, 0, 1e4) == doctest::Approx(1.0).epsilon(1e-8));

    ServiceModel pme3{PmeParams(3.0)};
    CHECK(equilibrium_tail_moment(pme3, 1, 2e4) == doctest::Approx(4.0 / 3.0).epsilon(1e-3));
}

TEST_CASE("equilibrium moment of a recovered heavy-tail service grows with the horizon") {
    auto grid = logspace(1e-3, 400.0, 300);
    auto rec = recover_service_from_pme_busy(2.0, 1.0, grid);
    double prev = equilibrium_tail_moment(rec.service_tail, 2, 50.0, rec.implied_alpha);
    for (double T : {100.0, 200.0, 400.0}) {
        const double cur = equilibrium_tail_moment(rec.service_tail, 2, T, rec.implied_alpha);
        CHECK(cur >= 1.2 * prev);
        prev = cur;
    }
}

TEST_CASE("divergence diagnostic rule") {
    CHECK(divergence_diagnostic({1.0, 1.5, 2.25, 3.4}) == TailClass::divergent);
    CHECK(divergence_diagnostic({1.0, 1.2, 1.25, 1.255}) == TailClass::finite);
    CHECK(divergence_diagnostic({1.0, 1.5, 1.6, 1.65}) == TailClass::inconclusive);
    CHECK(divergence_diagnostic({0.0, 1.0, 2.0, 4.0}) == TailClass::inconclusive);

    auto classify = [](const ServiceModel& m, int n, double T) {
        return divergence_diagnostic({equilibrium_tail_moment(m, n, T),
                                      equilibrium_tail_moment(m, n, 2 * T),
                                      equilibrium_tail_moment(m, n, 4 * T),
                                      equilibrium_tail_moment(m, n, 8 * T)});
    };
    CHECK(classify(ServiceModel{Exponential(1.0)}, 3, 10.0) == TailClass::finite);
    CHECK(classify(ServiceModel{PmeParams(2.0)}, 2, 10.0) == TailClass::divergent);
    CHECK(classify(ServiceModel{PmeParams(5.0)}, 2, 10.0) == TailClass::finite);
}

TEST_CASE("busy equilibrium transform: normalization, shape, heavy-tail probe") {
    QueueParams q = make_queue(1.0, ServiceModel{Exponential(1.0)});
    CHECK(busy_equilibrium_lt(q, 0.0) == 1.0);
    double prev = 1.0 + 1e-9;
    for (double s : {0.25, 0.5, 1.0, 2.0, 4.0}) {
        const double v = busy_equilibrium_lt(q, s);
        CHECK(v <= prev);
        CHECK(v >= 0.0);
        prev = v;
    }

    // infinite-mean busy equilibrium: finite-difference slope blows up at 0
    QueueParams heavy = make_queue(1.0, ServiceModel{PmeParams(1.5)});
    auto fd = [&](double s) {
        return std::abs(busy_equilibrium_lt(heavy, 1.01 * s) - busy_equilibrium_lt(heavy, 0.99 * s)) /
               (0.02 * s);
    };
    CHECK(fd(1e-4) > fd(1e-3));
}
