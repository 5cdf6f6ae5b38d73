#include "tlevy/cqmle.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace tlevy {

namespace {

// g1 = (d/dy) log phi_1(y) for the standard Cauchy density.
inline double g1(double e) { return -2.0 * e / (1.0 + e * e); }
inline double dg1(double e) {
    const double d = 1.0 + e * e;
    return (2.0 * e * e - 2.0) / (d * d);
}

void check_inputs(const TrendScale& a, const PathSample& path,
                  const SamplingDesign& design) {
    if (!(a.sigma > 0.0)) throw std::domain_error("cqmle: sigma must be > 0");
    if (static_cast<std::size_t>(a.mu.size()) != path.q())
        throw std::invalid_argument("cqmle: mu dimension mismatch");
    if (design.thinned_count() > path.design.num_steps())
        throw std::invalid_argument("cqmle: path shorter than the thinned window");
}

}  // namespace

double cauchy_loglik(const TrendScale& a, const PathSample& path,
                     const SamplingDesign& design) {
    check_inputs(a, path, design);
    const long nn = design.thinned_count();
    const double h = design.h();
    const double hs = h * a.sigma;
    double acc = 0.0;
    for (long j = 1; j <= nn; ++j) {
        const std::vector<double> dx = covariate_increment(path, j);
        double r = response_increment(path, j);
        for (std::size_t k = 0; k < dx.size(); ++k) r -= a.mu[k] * dx[k];
        const double e = r / hs;
        acc += -std::log(hs) - std::log(M_PI) - std::log1p(e * e);
    }
    return acc;
}

void cauchy_score_hessian(const TrendScale& a, const PathSample& path,
                          const SamplingDesign& design, Eigen::VectorXd& gradient,
                          Eigen::MatrixXd& hessian) {
    check_inputs(a, path, design);
    const long nn = design.thinned_count();
    const long q = a.mu.size();
    const double h = design.h();
    const double s = a.sigma;
    const double s2 = s * s;

    gradient = Eigen::VectorXd::Zero(q + 1);
    hessian = Eigen::MatrixXd::Zero(q + 1, q + 1);
    Eigen::VectorXd v(q);
    for (long j = 1; j <= nn; ++j) {
        const std::vector<double> dx = covariate_increment(path, j);
        double r = response_increment(path, j);
        for (long k = 0; k < q; ++k) {
            v[k] = dx[k] / h;
            r -= a.mu[k] * dx[k];
        }
        const double e = r / (h * s);
        const double ge = g1(e);
        const double dge = dg1(e);

        gradient.head(q) -= (ge / s) * v;
        gradient[q] -= (1.0 + e * ge) / s;

        hessian.topLeftCorner(q, q) += (dge / s2) * (v * v.transpose());
        hessian.block(0, q, q, 1) += ((ge + e * dge) / s2) * v;
        hessian(q, q) += (1.0 + 2.0 * e * ge + e * e * dge) / s2;
    }
    hessian.block(q, 0, 1, q) = hessian.block(0, q, q, 1).transpose();
}

CqmleFit fit_cqmle(const PathSample& path, const SamplingDesign& design,
                   const std::optional<TrendScale>& init, const CqmleOptions& options) {
    const long q = static_cast<long>(path.q());
    design.validate(path.q());
    const long nn = design.thinned_count();
    const double h = design.h();

    // Initialisation: OLS trend on increments, median-absolute-residual scale.
    TrendScale a;
    if (init) {
        a = *init;
        if (!(a.sigma > 0.0)) throw std::domain_error("fit_cqmle: init sigma must be > 0");
    } else {
        Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(q, q);
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(q);
        Eigen::VectorXd v(q);
        for (long j = 1; j <= nn; ++j) {
            const std::vector<double> dx = covariate_increment(path, j);
            for (long k = 0; k < q; ++k) v[k] = dx[k];
            gram += v * v.transpose();
            rhs += response_increment(path, j) * v;
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
        if (!lu.isInvertible())
            throw IdentifiabilityError("fit_cqmle: covariate increment Gram matrix is singular");
        a.mu = lu.solve(rhs);
        std::vector<double> absres(nn);
        for (long j = 1; j <= nn; ++j) {
            const std::vector<double> dx = covariate_increment(path, j);
            double r = response_increment(path, j);
            for (long k = 0; k < q; ++k) r -= a.mu[k] * dx[k];
            absres[j - 1] = std::fabs(r);
        }
        std::nth_element(absres.begin(), absres.begin() + nn / 2, absres.end());
        a.sigma = std::max(absres[nn / 2] / h, options.sigma_min);
    }

    const auto clamp_box = [&](TrendScale& x) {
        bool hit = false;
        for (long k = 0; k < q; ++k) {
            const double c = std::clamp(x.mu[k], -options.mu_bound, options.mu_bound);
            if (c != x.mu[k]) hit = true;
            x.mu[k] = c;
        }
        const double cs = std::clamp(x.sigma, options.sigma_min, options.sigma_max);
        if (cs != x.sigma) hit = true;
        x.sigma = cs;
        return hit;
    };
    clamp_box(a);

    CqmleFit fit;
    Eigen::VectorXd grad_as(q + 1);
    Eigen::MatrixXd hess_as(q + 1, q + 1);
    double value = cauchy_loglik(a, path, design);
    bool on_boundary = false;

    int iter = 0;
    for (; iter < options.max_iterations; ++iter) {
        cauchy_score_hessian(a, path, design, grad_as, hess_as);

        // Transform to (mu, log sigma): removes the positivity constraint.
        Eigen::VectorXd grad = grad_as;
        grad[q] *= a.sigma;
        Eigen::MatrixXd hess = hess_as;
        hess.block(0, q, q, 1) *= a.sigma;
        hess.block(q, 0, 1, q) *= a.sigma;
        hess(q, q) = a.sigma * a.sigma * hess_as(q, q) + a.sigma * grad_as[q];

        fit.gradient_norm = grad.norm();
        if (fit.gradient_norm <= options.gradient_tol) break;

        Eigen::VectorXd dir;
        Eigen::LDLT<Eigen::MatrixXd> ldlt(-hess);
        if (ldlt.info() == Eigen::Success && ldlt.isPositive())
            dir = ldlt.solve(grad);
        else
            dir = grad / std::max(1.0, grad.norm());
        if (dir.dot(grad) <= 0.0) dir = grad / std::max(1.0, grad.norm());

        // Near the optimum the predicted gain falls below the roundoff of
        // the summed log-likelihood; take the full Newton step outright and
        // let the gradient tolerance terminate.
        const double predicted = dir.dot(grad);
        if (predicted <= 1e-9 * (1.0 + std::fabs(value))) {
            TrendScale cand;
            cand.mu = a.mu + dir.head(q);
            cand.sigma = a.sigma * std::exp(dir[q]);
            on_boundary = clamp_box(cand);
            a = cand;
            value = cauchy_loglik(a, path, design);
            continue;
        }

        // Backtracking line search with box projection.
        double alpha = 1.0;
        bool improved = false;
        for (int ls = 0; ls < 60; ++ls) {
            TrendScale cand;
            cand.mu = a.mu + alpha * dir.head(q);
            cand.sigma = a.sigma * std::exp(alpha * dir[q]);
            const bool hit = clamp_box(cand);
            const double cand_value = cauchy_loglik(cand, path, design);
            if (cand_value > value + 1e-4 * alpha * dir.dot(grad) ||
                (ls > 0 && cand_value > value)) {
                a = cand;
                value = cand_value;
                on_boundary = hit;
                improved = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!improved) break;  // stalled; report best iterate
    }

    cauchy_score_hessian(a, path, design, grad_as, hess_as);
    Eigen::VectorXd grad = grad_as;
    grad[q] *= a.sigma;
    fit.mu_hat = a.mu;
    fit.sigma_hat = a.sigma;
    fit.loglik = value;
    fit.gradient_norm = grad.norm();
    fit.iterations = iter;
    fit.boundary = on_boundary;
    fit.hessian = -hess_as / static_cast<double>(nn);
    fit.converged = !on_boundary && fit.gradient_norm <= options.gradient_tol;
    return fit;
}

}  // namespace tlevy
