#include "tlevy/inference.hpp"

#include <cmath>
#include <stdexcept>

#include "tlevy/specfun.hpp"

namespace tlevy {

Eigen::MatrixXd covariate_gram(const PathSample& path, const SamplingDesign& design) {
    const long q = static_cast<long>(path.q());
    const long nn = design.thinned_count();
    const double h = design.h();
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(q, q);
    Eigen::VectorXd v(q);
    for (long j = 1; j <= nn; ++j) {
        const std::vector<double> dx = covariate_increment(path, j);
        for (long k = 0; k < q; ++k) v[k] = dx[k] / h;
        s += v * v.transpose();
    }
    return s / static_cast<double>(nn);
}

double fisher_nu(double nu) {
    if (!(nu > 0.0)) throw std::domain_error("fisher_nu: nu must be > 0");
    return 0.25 * (trigamma(0.5 * nu) - trigamma(0.5 * (nu + 1.0)));
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_quantile(double p) {
    if (!(p > 0.0) || !(p < 1.0))
        throw std::domain_error("normal_quantile: p must be in (0,1)");
    // Beasley-Springer-Moro style rational start, polished by Newton.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (p < plow) {
        const double qv = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * qv + c[1]) * qv + c[2]) * qv + c[3]) * qv + c[4]) * qv + c[5]) /
            ((((d[0] * qv + d[1]) * qv + d[2]) * qv + d[3]) * qv + 1.0);
    } else if (p > 1.0 - plow) {
        const double qv = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * qv + c[1]) * qv + c[2]) * qv + c[3]) * qv + c[4]) * qv + c[5]) /
            ((((d[0] * qv + d[1]) * qv + d[2]) * qv + d[3]) * qv + 1.0);
    } else {
        const double qv = p - 0.5;
        const double r = qv * qv;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * qv /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }
    for (int i = 0; i < 2; ++i) {
        const double err = normal_cdf(x) - p;
        const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
        x -= err / pdf;
    }
    return x;
}

FitResult studentize(const CqmleFit& stage1, const TqmleFit& stage2,
                     const PathSample& path, const SamplingDesign& design,
                     const std::optional<Theta>& theta0, double ci_level) {
    const long q = stage1.mu_hat.size();
    FitResult out;
    out.stage1 = stage1;
    out.stage2 = stage2;
    out.ci_level = ci_level;
    out.balance_warning = design.balance_warning();

    out.s_hat = covariate_gram(path, design);
    const double s2 = stage1.sigma_hat * stage1.sigma_hat;
    out.gamma_a = Eigen::MatrixXd::Zero(q + 1, q + 1);
    out.gamma_a.topLeftCorner(q, q) = out.s_hat / (2.0 * s2);
    out.gamma_a(q, q) = 1.0 / (2.0 * s2);
    out.gamma_nu = fisher_nu(stage2.nu_hat);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(out.gamma_a);
    const double eig_min = eig.eigenvalues().minCoeff();
    const double eig_max = eig.eigenvalues().maxCoeff();
    if (!(eig_min > 1e-12 * std::max(1.0, eig_max)))
        throw IdentifiabilityError(
            "studentize: Gamma_a is numerically singular (S_hat block)");

    const double nn = static_cast<double>(design.thinned_count());
    const double tn = std::floor(design.horizon);

    if (theta0) {
        if (static_cast<long>(theta0->mu.size()) != q)
            throw std::invalid_argument("studentize: theta0 dimension mismatch");
        const Eigen::MatrixXd root =
            eig.eigenvectors() *
            eig.eigenvalues().cwiseSqrt().asDiagonal() *
            eig.eigenvectors().transpose();
        Eigen::VectorXd ua(q + 1);
        for (long k = 0; k < q; ++k) ua[k] = stage1.mu_hat[k] - theta0->mu[k];
        ua[q] = stage1.sigma_hat - theta0->sigma;
        ua *= std::sqrt(nn);
        Eigen::VectorXd st(q + 2);
        st.head(q + 1) = root * ua;
        st[q + 1] = std::sqrt(out.gamma_nu) * std::sqrt(tn) * (stage2.nu_hat - theta0->nu);
        out.studentized = st;
        out.log_sigma_studentized =
            std::sqrt(nn / 2.0) * (std::log(stage1.sigma_hat) - std::log(theta0->sigma));
    }

    // Wald intervals from the inverse information blocks.
    const double z = normal_quantile(0.5 + 0.5 * ci_level);
    const Eigen::MatrixXd cov_a = out.gamma_a.inverse() / nn;
    out.ci.resize(q + 2);
    for (long k = 0; k < q; ++k) {
        const double se = std::sqrt(cov_a(k, k));
        out.ci[k] = {stage1.mu_hat[k] - z * se, stage1.mu_hat[k] + z * se};
    }
    {
        const double se = std::sqrt(cov_a(q, q));
        out.ci[q] = {stage1.sigma_hat - z * se, stage1.sigma_hat + z * se};
        const double se_nu = std::sqrt(1.0 / (out.gamma_nu * tn));
        out.ci[q + 1] = {stage2.nu_hat - z * se_nu, stage2.nu_hat + z * se_nu};
    }
    return out;
}

}  // namespace tlevy
