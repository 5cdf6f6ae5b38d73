#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "tlevy/specfun.hpp"

namespace {

// Slowly converging series definitions with tail corrections; used only as
// reference oracles.
double digamma_series(double x) {
    const double gamma_e = 0.57721566490153286061;
    double s = -gamma_e;
    const long terms = 2000000;
    for (long k = 0; k < terms; ++k)
        s += 1.0 / (k + 1.0) - 1.0 / (k + x);
    // tail: sum_{k>=K} [1/(k+1) - 1/(k+x)] ~ (x-1)/K - (x-1)(x+2)/(2K^2)...
    const double K = static_cast<double>(terms);
    s += (x - 1.0) / K;
    return s;
}

double trigamma_series(double x) {
    double s = 0.0;
    const long terms = 2000000;
    for (long k = 0; k < terms; ++k)
        s += 1.0 / ((x + k) * (x + k));
    // tail: sum_{k>=K} (x+k)^-2 ~ 1/(K+x) + 1/(2(K+x)^2)
    const double K = static_cast<double>(terms);
    s += 1.0 / (K + x) + 0.5 / ((K + x) * (K + x));
    return s;
}

// K_nu(t) = (1/2) int_0^inf s^{nu-1} exp(-(t/2)(s+1/s)) ds evaluated by
// the substitution s = e^v: K_nu(t) = int_0^inf cosh(nu v) e^{-t cosh v} dv,
// done with fine trapezoids (integrand is smooth, doubly-exponential decay).
double bessel_k_integral(double nu, double x) {
    const double vmax = 60.0;
    const long n = 400000;  // even, Simpson
    const double dv = vmax / n;
    double s = 0.0;
    for (long i = 0; i <= n; ++i) {
        const double v = i * dv;
        // work with e^x K_nu(x): multiply by e^x inside the exponent
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        const double e = -x * (std::cosh(v) - 1.0);
        if (e < -745.0) break;
        s += w * std::cosh(nu * v) * std::exp(e);
    }
    return s * dv / 3.0;  // scaled value e^x K_nu(x)
}

}  // namespace

TEST_CASE("log_gamma closed forms") {
    CHECK(tlevy::log_gamma(1.0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(tlevy::log_gamma(0.5) ==
          doctest::Approx(0.5 * std::log(M_PI)).epsilon(1e-13));
    CHECK(tlevy::log_gamma(10.0) ==
          doctest::Approx(std::log(362880.0)).epsilon(1e-13));
    CHECK_THROWS_AS(tlevy::log_gamma(0.0), std::domain_error);
    CHECK_THROWS_AS(tlevy::log_gamma(-1.0), std::domain_error);
}

TEST_CASE("digamma against the series oracle") {
    for (double x : {0.25, 0.5, 1.0, 1.5, 2.0, 3.7, 10.0, 41.5}) {
        CHECK(tlevy::digamma(x) == doctest::Approx(digamma_series(x)).epsilon(1e-9));
    }
    const double gamma_e = 0.57721566490153286061;
    CHECK(tlevy::digamma(1.0) == doctest::Approx(-gamma_e).epsilon(1e-12));
    CHECK(tlevy::digamma(2.0) == doctest::Approx(1.0 - gamma_e).epsilon(1e-12));
    // duplication identity
    CHECK(tlevy::digamma(1.0) - tlevy::digamma(0.5) ==
          doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-12));
    CHECK_THROWS_AS(tlevy::digamma(0.0), std::domain_error);
}

TEST_CASE("trigamma against the series oracle") {
    for (double x : {0.25, 0.5, 1.0, 1.5, 2.0, 3.7, 10.0, 41.5}) {
        CHECK(tlevy::trigamma(x) ==
              doctest::Approx(trigamma_series(x)).epsilon(1e-9));
    }
    const double pi2 = M_PI * M_PI;
    CHECK(tlevy::trigamma(1.0) == doctest::Approx(pi2 / 6.0).epsilon(1e-12));
    CHECK(tlevy::trigamma(0.5) == doctest::Approx(pi2 / 2.0).epsilon(1e-12));
    CHECK(tlevy::trigamma(2.0) == doctest::Approx(pi2 / 6.0 - 1.0).epsilon(1e-12));
    // positive, decreasing
    CHECK(tlevy::trigamma(5.0) > tlevy::trigamma(6.0));
    CHECK(tlevy::trigamma(100.0) > 0.0);
    CHECK_THROWS_AS(tlevy::trigamma(-0.5), std::domain_error);
}

TEST_CASE("bessel_k_scaled closed forms") {
    // K_{1/2}(x) = sqrt(pi/(2x)) e^{-x}
    for (double x : {0.1, 0.5, 2.0, 10.0, 100.0}) {
        CHECK(tlevy::bessel_k_scaled(0.5, x) ==
              doctest::Approx(std::sqrt(M_PI / (2.0 * x))).epsilon(1e-12));
    }
    CHECK(tlevy::bessel_k_scaled(1.0, 1.0) ==
          doctest::Approx(std::exp(1.0) * 0.60190723019723457).epsilon(1e-11));
    CHECK_THROWS_AS(tlevy::bessel_k_scaled(1.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(tlevy::bessel_k_scaled(-1.0, 1.0), std::domain_error);
}

TEST_CASE("bessel_k_scaled against the integral oracle") {
    for (double nu : {0.0, 0.25, 0.5, 1.0, 2.5, 7.0, 15.5}) {
        for (double x : {0.05, 0.3, 1.0, 2.0, 5.0, 30.0}) {
            const double ref = bessel_k_integral(nu, x);
            CHECK(tlevy::bessel_k_scaled(nu, x) ==
                  doctest::Approx(ref).epsilon(1e-9));
        }
    }
}

TEST_CASE("bessel_k_scaled wide-range accuracy lattice") {
    // relative 1e-10 against the integral oracle across the working range
    std::vector<double> orders{0.0, 0.5, 1.0, 3.0, 10.0, 30.0, 60.0};
    std::vector<double> xs{1e-8, 1e-4, 0.01, 0.5, 2.0, 2.5, 10.0, 1e3, 1e4};
    for (double nu : orders) {
        for (double x : xs) {
            const double ref = bessel_k_integral(nu, x);
            if (!std::isfinite(ref) || ref == 0.0) continue;  // oracle overflow
            CHECK(tlevy::bessel_k_scaled(nu, x) ==
                  doctest::Approx(ref).epsilon(1e-9));
        }
    }
    // large-x asymptotics: e^x K_nu(x) -> sqrt(pi/(2x))
    const double x = 1e6;
    CHECK(tlevy::bessel_k_scaled(0.5, x) ==
          doctest::Approx(std::sqrt(M_PI / (2.0 * x))).epsilon(1e-6));
    CHECK(tlevy::bessel_k_scaled(2.0, x) ==
          doctest::Approx(std::sqrt(M_PI / (2.0 * x))).epsilon(1e-5));
}

TEST_CASE("bessel_k_scaled small-argument expansion") {
    // K_nu(x) -> (1/2) Gamma(nu) (2/x)^nu as x -> 0 (nu > 0),
    // K_0(x) -> -log(x/2) - gamma_E.
    const double gamma_e = 0.57721566490153286061;
    for (double nu : {1.0, 2.0, 3.0}) {
        for (double x : {1e-8, 1e-6, 1e-4}) {
            const double lead =
                0.5 * std::exp(tlevy::log_gamma(nu)) * std::pow(2.0 / x, nu);
            CHECK(tlevy::bessel_k_scaled(nu, x) ==
                  doctest::Approx(lead * std::exp(x)).epsilon(1e-7));
        }
    }
    CHECK(tlevy::bessel_k_scaled(0.0, 1e-8) ==
          doctest::Approx(std::exp(1e-8) * (-std::log(0.5e-8) - gamma_e))
              .epsilon(1e-9));
}
