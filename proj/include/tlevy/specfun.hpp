#ifndef TLEVY_SPECFUN_HPP
#define TLEVY_SPECFUN_HPP

// Scalar special functions: log-gamma, digamma, trigamma, and the modified
// Bessel function of the second kind in exponentially scaled form.
// All functions reject out-of-domain input by throwing std::domain_error.

namespace tlevy {

/// ln Gamma(x), x > 0.
double log_gamma(double x);

/// psi(x) = d/dx ln Gamma(x), x > 0.
double digamma(double x);

/// psi_1(x) = d/dx psi(x), x > 0. Strictly positive and decreasing.
double trigamma(double x);

/// e^x * K_order(x) for order >= 0, x > 0.
/// The scaling keeps the value finite for x up to ~1e6 where the raw
/// K underflows. Callers with negative order use K_{-r} = K_r.
double bessel_k_scaled(double order, double x);

}  // namespace tlevy

#endif
