#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include <pmeq/quadrature.hpp>

#include "oracles.hpp"

using namespace pmeq;

TEST_CASE("polynomial and smooth integrands") {
    auto r1 = integrate([](double x) { return x * x; }, 0.0, 1.0);
    CHECK(r1.converged);
    CHECK(r1.value == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    auto r2 = integrate([](double x) { return std::sin(x); }, 0.0, 3.14159265358979323846);
    CHECK(r2.value == doctest::Approx(2.0).epsilon(1e-12));

    auto r3 = integrate([](double x) { return std::exp(-x * x); }, -8.0, 8.0);
    CHECK(r3.value == doctest::Approx(std::sqrt(3.14159265358979323846)).epsilon(1e-12));
}

TEST_CASE("oscillatory integrand refines adaptively") {
    auto r = integrate([](double x) { return std::sin(40.0 * x); }, 0.0, 1.0);
    CHECK(r.converged);
    const double expected = (1.0 - std::cos(40.0)) / 40.0;
    CHECK(r.value == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("integrable endpoint singularity") {
    auto r = integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, {1e-9, 1e-9, 4000});
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("complex-valued integrand") {
    auto r = integrate([](double x) { return std::exp(std::complex<double>(0.0, x)); }, 0.0, 1.0);
    CHECK(r.converged);
    CHECK(r.value.real() == doctest::Approx(std::sin(1.0)).epsilon(1e-12));
    CHECK(r.value.imag() == doctest::Approx(1.0 - std::cos(1.0)).epsilon(1e-12));
}

TEST_CASE("breakpoints route panels through a kink") {
    auto f = [](double x) { return x < 0.3 ? 1.0 : 0.0; };
    auto r = integrate_split(f, 0.0, 1.0, {0.3});
    CHECK(r.value == doctest::Approx(0.3).epsilon(1e-9));
}

TEST_CASE("semi-infinite integration") {
    auto r1 = integrate_to_infinity([](double t) { return std::exp(-t); }, 0.0);
    CHECK(r1.converged);
    CHECK(r1.value == doctest::Approx(1.0).epsilon(1e-10));

    // power-law decay converges slowly but within the horizon
    auto r2 = integrate_to_infinity([](double t) { return std::pow(1.0 + t, -3.0); }, 0.0);
    CHECK(r2.converged);
    CHECK(r2.value == doctest::Approx(0.5).epsilon(1e-7));

    // damped oscillation
    auto r3 = integrate_to_infinity([](double t) { return std::exp(-t) * std::cos(10.0 * t); }, 0.0);
    CHECK(r3.converged);
    CHECK(r3.value == doctest::Approx(1.0 / 101.0).epsilon(1e-8));
}

TEST_CASE("non-decaying integrand fails to converge") {
    TailPolicy pol;
    pol.max_horizon = 1e6;
    auto r = integrate_to_infinity([](double t) { return 1.0 / (1.0 + t); }, 0.0, pol);
    CHECK_FALSE(r.converged);
}

TEST_CASE("simpson oracle agrees with the adaptive engine") {
    auto f = [](double x) { return std::exp(-x) * std::cos(x); };
    const double lib = integrate(f, 0.0, 5.0).value;
    const double ref = oracle::simpson(f, 0.0, 5.0, 4000);
    CHECK(lib == doctest::Approx(ref).epsilon(1e-10));
}
