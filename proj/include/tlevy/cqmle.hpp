#ifndef TLEVY_CQMLE_HPP
#define TLEVY_CQMLE_HPP

#include <Eigen/Dense>
#include <optional>
#include <stdexcept>

#include "tlevy/model.hpp"

namespace tlevy {

struct IdentifiabilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Trend/scale pair for the first stage.
struct TrendScale {
    Eigen::VectorXd mu;
    double sigma = 1.0;
};

struct CqmleFit {
    Eigen::VectorXd mu_hat;
    double sigma_hat = 0.0;
    double loglik = 0.0;
    double gradient_norm = 0.0;
    Eigen::MatrixXd hessian;  // -d^2 H_1 / N_n at the optimum, (q+1)x(q+1)
    int iterations = 0;
    bool converged = false;
    bool boundary = false;
};

/// Admissible box for (mu, sigma); wide defaults.
struct CqmleOptions {
    double mu_bound = 1e6;        // |mu_k| <= mu_bound
    double sigma_min = 1e-8;
    double sigma_max = 1e8;
    double gradient_tol = 1e-8;
    int max_iterations = 200;
};

/// Cauchy quasi-log-likelihood H_1(a) over the thinned window, constants
/// included so values are comparable across sigma.
double cauchy_loglik(const TrendScale& a, const PathSample& path,
                     const SamplingDesign& design);

/// Analytic gradient and Hessian of cauchy_loglik in (mu, sigma).
void cauchy_score_hessian(const TrendScale& a, const PathSample& path,
                          const SamplingDesign& design, Eigen::VectorXd& gradient,
                          Eigen::MatrixXd& hessian);

/// Safeguarded Newton ascent in (mu, log sigma).
CqmleFit fit_cqmle(const PathSample& path, const SamplingDesign& design,
                   const std::optional<TrendScale>& init = std::nullopt,
                   const CqmleOptions& options = CqmleOptions());

}  // namespace tlevy

#endif
