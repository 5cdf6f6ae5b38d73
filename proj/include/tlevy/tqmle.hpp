#ifndef TLEVY_TQMLE_HPP
#define TLEVY_TQMLE_HPP

#include <Eigen/Dense>
#include <vector>

#include "tlevy/model.hpp"

namespace tlevy {

/// Unit-time residuals, length floor(T_n).
struct ResidualSet {
    std::vector<double> values;
    Eigen::VectorXd mu_hat;
    double sigma_hat = 1.0;
};

enum class NuBoundary { none, lower, upper };

struct TqmleFit {
    double nu_hat = 0.0;
    double mbar = 0.0;  // mean of log(1 + eps^2)
    bool converged = false;
    NuBoundary boundary_flag = NuBoundary::none;
};

struct TqmleOptions {
    double nu_min = 0.05;
    double nu_max = 100.0;
    double score_tol = 1e-10;
};

/// eps_i = sigma_hat^{-1} (Y_i - Y_{i-1} - mu_hat . (X_i - X_{i-1})) at
/// integer times i = 1..floor(T_n), from the full path.
ResidualSet unit_residuals(const PathSample& path, const Eigen::VectorXd& mu_hat,
                           double sigma_hat);

/// Student quasi-log-likelihood H_2(nu), constants included.
double student_loglik(double nu, const ResidualSet& residuals);

/// Maximiser of H_2 over [nu_min, nu_max]; the stationarity condition is the
/// monotone equation psi((nu+1)/2) - psi(nu/2) = mbar.
TqmleFit fit_tqmle(const ResidualSet& residuals,
                   const TqmleOptions& options = TqmleOptions());

}  // namespace tlevy

#endif
