#include "tlevy/specfun.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace tlevy {

namespace {

void require_positive_finite(double x, const char* fn) {
    if (!std::isfinite(x) || x <= 0.0)
        throw std::domain_error(std::string(fn) + ": argument must be finite and > 0");
}

// Bernoulli numbers B_2 .. B_14 over index, for the asymptotic expansions.
constexpr double kBern[] = {1.0 / 6.0,  -1.0 / 30.0, 1.0 / 42.0,  -1.0 / 30.0,
                            5.0 / 66.0, -691.0 / 2730.0, 7.0 / 6.0};

}  // namespace

double log_gamma(double x) {
    require_positive_finite(x, "log_gamma");
    return std::lgamma(x);
}

double digamma(double x) {
    require_positive_finite(x, "digamma");
    // Shift into the asymptotic region, then expand.
    double acc = 0.0;
    while (x < 6.0) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    double result = std::log(x) - 0.5 * inv;
    double p = inv2;
    for (int k = 0; k < 7; ++k) {
        result -= kBern[k] / (2.0 * (k + 1)) * p;
        p *= inv2;
    }
    return result + acc;
}

double trigamma(double x) {
    require_positive_finite(x, "trigamma");
    double acc = 0.0;
    while (x < 6.0) {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    double result = inv + 0.5 * inv2;
    double p = inv * inv2;
    for (int k = 0; k < 7; ++k) {
        result += kBern[k] * p;
        p *= inv2;
    }
    return result + acc;
}

namespace {

// Coefficients of 1/Gamma(1+mu) = sum a_k mu^k, |mu| <= 1/2.
constexpr double kInvGammaCoef[] = {
    1.0,
    0.57721566490153286061,   // gamma
    -0.65587807152025388108,
    -0.04200263503409523553,
    0.16653861138229148950,
    -0.04219773455554433675,
    -0.00962197152787697356,
    0.00721894324666309954,
    -0.00116516759185906511,
    -0.00021524167411495097,
    0.00012805028238811619,
    -0.00002013485478078824,
    -0.00000125049348214267,
    0.00000113302723198170,
    -0.00000020563384169776,
    0.00000000611609510448,
    0.00000000500200764447,
    -0.00000000118127457049,
    0.00000000010434267117,
    0.00000000000778226344,
    -0.00000000000369680562,
    0.00000000000051003703,
    -0.00000000000002058326,
    -0.00000000000000534812,
    0.00000000000000122678,
    -0.00000000000000011813};

double inv_gamma_one_plus(double mu) {
    double s = 0.0;
    for (int k = 25; k >= 0; --k) s = s * mu + kInvGammaCoef[k];
    return s;
}

// Temme's auxiliary functions:
//   gam1 = (1/Gamma(1-mu) - 1/Gamma(1+mu)) / (2 mu)
//   gam2 = (1/Gamma(1-mu) + 1/Gamma(1+mu)) / 2
void temme_gam(double mu, double& gam1, double& gam2) {
    const double gp = inv_gamma_one_plus(mu);
    const double gm = inv_gamma_one_plus(-mu);
    gam2 = 0.5 * (gm + gp);
    if (std::fabs(mu) > 1e-4) {
        gam1 = (gm - gp) / (2.0 * mu);
    } else {
        // Odd part of the 1/Gamma(1+mu) series, stable at mu -> 0.
        const double mu2 = mu * mu;
        gam1 = -(kInvGammaCoef[1] + mu2 * (kInvGammaCoef[3] +
                 mu2 * (kInvGammaCoef[5] + mu2 * kInvGammaCoef[7])));
    }
}

// Temme series for K_mu(x), K_{mu+1}(x) with |mu| <= 1/2, 0 < x <= 2.
// Returns unscaled values (no overflow risk for x <= 2).
void bessel_k_series(double mu, double x, double& kmu, double& kmu1) {
    constexpr double kEps = std::numeric_limits<double>::epsilon();
    const double x2 = 0.5 * x;
    const double pimu = M_PI * mu;
    const double fact = (std::fabs(pimu) < 1e-8) ? 1.0 : pimu / std::sin(pimu);
    double d = -std::log(x2);
    double e = mu * d;
    const double fact2 = (std::fabs(e) < 1e-8) ? 1.0 : std::sinh(e) / e;
    double gam1, gam2;
    temme_gam(mu, gam1, gam2);
    double ff = fact * (gam1 * std::cosh(e) + gam2 * fact2 * d);
    double sum = ff;
    e = std::exp(e);
    double p = 0.5 * e / (gam2 - mu * gam1);   // = 0.5 * e * Gamma(1+mu)
    double q = 0.5 / (e * (gam2 + mu * gam1)); // = 0.5 * Gamma(1-mu) / e
    double c = 1.0;
    d = x2 * x2;
    double sum1 = p;
    for (int i = 1; i <= 1000; ++i) {
        ff = (i * ff + p + q) / (i * i - mu * mu);
        c *= d / i;
        p /= (i - mu);
        q /= (i + mu);
        const double del = c * ff;
        sum += del;
        const double del1 = c * (p - i * ff);
        sum1 += del1;
        if (std::fabs(del) < std::fabs(sum) * kEps) break;
    }
    kmu = sum;
    kmu1 = sum1 * 2.0 / x;
}

// Steed's continued fraction (CF2) for e^x K_mu(x), e^x K_{mu+1}(x),
// |mu| <= 1/2, x > 2.
void bessel_k_cf2(double mu, double x, double& kmu_scaled, double& kmu1_scaled) {
    constexpr double kEps = std::numeric_limits<double>::epsilon();
    const double mu2 = mu * mu;
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double h = d;
    double delh = d;
    double q1 = 0.0, q2 = 1.0;
    const double a1 = 0.25 - mu2;
    double q = a1;
    double c = a1;
    double a = -a1;
    double s = 1.0 + q * delh;
    for (int i = 2; i <= 10000; ++i) {
        a -= 2 * (i - 1);
        c = -a * c / i;
        const double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const double dels = q * delh;
        s += dels;
        if (std::fabs(dels / s) < kEps) break;
    }
    h = a1 * h;
    kmu_scaled = std::sqrt(M_PI / (2.0 * x)) / s;
    kmu1_scaled = kmu_scaled * (mu + x + 0.5 - h) / x;
}

}  // namespace

double bessel_k_scaled(double order, double x) {
    if (!std::isfinite(order) || order < 0.0)
        throw std::domain_error("bessel_k_scaled: order must be finite and >= 0");
    if (!std::isfinite(x) || x <= 0.0)
        throw std::domain_error("bessel_k_scaled: x must be finite and > 0");

    const int nl = static_cast<int>(order + 0.5);
    const double mu = order - nl;  // |mu| <= 1/2

    double kmu, kmu1;
    if (x <= 2.0) {
        bessel_k_series(mu, x, kmu, kmu1);
        const double ex = std::exp(x);
        kmu *= ex;
        kmu1 *= ex;
    } else {
        bessel_k_cf2(mu, x, kmu, kmu1);
    }
    // Upward recurrence in the order (stable for K).
    double m = mu;
    for (int i = 0; i < nl; ++i) {
        const double knext = kmu + 2.0 * (m + 1.0) / x * kmu1;
        kmu = kmu1;
        kmu1 = knext;
        m += 1.0;
    }
    return kmu;
}

}  // namespace tlevy
