#include "tlevy/tqmle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tlevy/specfun.hpp"

namespace tlevy {

ResidualSet unit_residuals(const PathSample& path, const Eigen::VectorXd& mu_hat,
                           double sigma_hat) {
    if (!(sigma_hat > 0.0)) throw std::domain_error("unit_residuals: sigma_hat must be > 0");
    const long units = static_cast<long>(std::floor(path.design.horizon));
    if (units < 1) throw std::domain_error("unit_residuals: horizon must cover a unit interval");
    const long n = path.design.n;
    const long q = static_cast<long>(path.q());
    if (mu_hat.size() != q) throw std::invalid_argument("unit_residuals: mu dimension mismatch");

    ResidualSet rs;
    rs.mu_hat = mu_hat;
    rs.sigma_hat = sigma_hat;
    rs.values.resize(units);
    for (long i = 1; i <= units; ++i) {
        double r = path.responses[i * n] - path.responses[(i - 1) * n];
        if (path.covariates_are_drift) {
            // X_i - X_{i-1} is the Euler sum of h * b(Y_{t_{j-1}}) over A_i.
            for (long j = (i - 1) * n + 1; j <= i * n; ++j) {
                const std::vector<double> dx = covariate_increment(path, j);
                for (long k = 0; k < q; ++k) r -= mu_hat[k] * dx[k];
            }
        } else {
            for (long k = 0; k < q; ++k)
                r -= mu_hat[k] *
                     (path.covariates[i * n][k] - path.covariates[(i - 1) * n][k]);
        }
        rs.values[i - 1] = r / sigma_hat;
    }
    return rs;
}

double student_loglik(double nu, const ResidualSet& residuals) {
    if (!(nu > 0.0)) throw std::domain_error("student_loglik: nu must be > 0");
    const double c = -0.5 * std::log(M_PI) + log_gamma(0.5 * (nu + 1.0)) -
                     log_gamma(0.5 * nu);
    double acc = 0.0;
    for (double e : residuals.values)
        acc += c - 0.5 * (nu + 1.0) * std::log1p(e * e);
    return acc;
}

namespace {

// D(nu) = psi((nu+1)/2) - psi(nu/2); strictly decreasing from +inf to 0.
double score_gap(double nu) { return digamma(0.5 * (nu + 1.0)) - digamma(0.5 * nu); }
double score_gap_deriv(double nu) {
    return 0.5 * (trigamma(0.5 * (nu + 1.0)) - trigamma(0.5 * nu));
}

}  // namespace

TqmleFit fit_tqmle(const ResidualSet& residuals, const TqmleOptions& options) {
    if (residuals.values.empty()) throw std::domain_error("fit_tqmle: empty residual set");
    if (!(options.nu_min > 0.0) || !(options.nu_min < options.nu_max))
        throw std::domain_error("fit_tqmle: need 0 < nu_min < nu_max");

    const double count = static_cast<double>(residuals.values.size());
    double mbar = 0.0;
    for (double e : residuals.values) mbar += std::log1p(e * e);
    mbar /= count;

    TqmleFit fit;
    fit.mbar = mbar;

    if (mbar >= score_gap(options.nu_min)) {
        fit.nu_hat = options.nu_min;
        fit.boundary_flag = NuBoundary::lower;
        fit.converged = true;
        return fit;
    }
    if (mbar <= score_gap(options.nu_max)) {
        fit.nu_hat = options.nu_max;
        fit.boundary_flag = NuBoundary::upper;
        fit.converged = true;
        return fit;
    }

    // Bracketed Newton on the strictly decreasing gap.
    double lo = options.nu_min, hi = options.nu_max;
    double nu = std::clamp(1.0, lo, hi);
    const double gap_tol = 2.0 * options.score_tol / count;
    for (int iter = 0; iter < 200; ++iter) {
        const double g = score_gap(nu) - mbar;
        if (std::fabs(g) <= gap_tol) {
            fit.converged = true;
            break;
        }
        (g > 0.0 ? lo : hi) = nu;
        const double step = g / score_gap_deriv(nu);
        double next = nu - step;
        if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
        nu = next;
    }
    fit.nu_hat = nu;
    return fit;
}

}  // namespace tlevy
