#ifndef TLEVY_INFERENCE_HPP
#define TLEVY_INFERENCE_HPP

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "tlevy/cqmle.hpp"
#include "tlevy/model.hpp"
#include "tlevy/tqmle.hpp"

namespace tlevy {

struct ConfidenceInterval {
    double lower = 0.0;
    double upper = 0.0;
};

/// Combined two-stage fit with the asymptotic covariance pieces.
struct FitResult {
    CqmleFit stage1;
    TqmleFit stage2;
    Eigen::MatrixXd s_hat;     // q x q covariate Gram
    Eigen::MatrixXd gamma_a;   // blockdiag(S_hat, 1) / (2 sigma_hat^2)
    double gamma_nu = 0.0;
    // theta0 provided: studentized statistics (length q+2) plus the
    // variance-stabilised log-sigma channel; otherwise Wald intervals.
    std::optional<Eigen::VectorXd> studentized;
    std::optional<double> log_sigma_studentized;
    std::vector<ConfidenceInterval> ci;  // per parameter (mu_1..mu_q, sigma, nu)
    double ci_level = 0.95;
    bool balance_warning = false;
};

/// S_hat = (1/N_n) sum (h^{-1} Delta_j X)^{otimes 2}.
Eigen::MatrixXd covariate_gram(const PathSample& path, const SamplingDesign& design);

/// Fisher information for nu: (1/4)(psi_1(nu/2) - psi_1((nu+1)/2)).
double fisher_nu(double nu);

/// Assemble covariance estimates, studentized statistics (when theta0 is
/// given) or Wald confidence intervals (when it is not).
FitResult studentize(const CqmleFit& stage1, const TqmleFit& stage2,
                     const PathSample& path, const SamplingDesign& design,
                     const std::optional<Theta>& theta0, double ci_level = 0.95);

double normal_cdf(double x);
double normal_quantile(double p);

}  // namespace tlevy

#endif
