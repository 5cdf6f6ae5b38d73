#include "tlevy/simulate.hpp"

#include <cmath>
#include <stdexcept>

#include "tlevy/rng.hpp"

namespace tlevy {

std::size_t RegressorSpec::dimension() const {
    std::size_t q = 0;
    switch (kind) {
        case Kind::periodic_pair:
            q = 2;
            break;
        case Kind::custom_periodic:
            q = 2 * frequencies.size();
            break;
        case Kind::diffusion_ou:
            q = 1;
            break;
    }
    if (append_ou && kind != Kind::diffusion_ou) q += 1;
    return q;
}

void RegressorSpec::validate() const {
    if (kind == Kind::custom_periodic) {
        if (frequencies.empty())
            throw std::domain_error("RegressorSpec: need at least one frequency");
        for (double f : frequencies)
            if (!(f > 0.0)) throw std::domain_error("RegressorSpec: frequencies must be > 0");
    }
    if (kind == Kind::diffusion_ou || append_ou) {
        if (!(ou_rate > 0.0)) throw std::domain_error("RegressorSpec: ou_rate must be > 0");
        if (ou_vol < 0.0) throw std::domain_error("RegressorSpec: ou_vol must be >= 0");
    }
    if (dimension() == 0) throw std::domain_error("RegressorSpec: no regressors");
}

namespace {

std::vector<double> deterministic_regressors(const RegressorSpec& spec, double t) {
    std::vector<double> x;
    switch (spec.kind) {
        case RegressorSpec::Kind::periodic_pair:
            x = {std::cos(5.0 * t), std::sin(t)};
            break;
        case RegressorSpec::Kind::custom_periodic:
            for (double f : spec.frequencies) {
                x.push_back(std::cos(f * t));
                x.push_back(std::sin(f * t));
            }
            break;
        case RegressorSpec::Kind::diffusion_ou:
            break;
    }
    return x;
}

// Streams within one path simulation.
enum : std::uint64_t { kLevyStream = 0, kWienerStream = 1 };

}  // namespace

PathSample simulate_regression_path(const Theta& theta0, const SamplingDesign& design,
                                    const RegressorSpec& regressors,
                                    const DensityTable& table, std::uint64_t seed) {
    // sigma0 = 0 (noise-free path) is permitted for testing.
    if (theta0.sigma < 0.0 || !std::isfinite(theta0.sigma))
        throw std::domain_error("simulate_regression_path: sigma must be >= 0");
    if (!(theta0.nu > 0.0)) throw std::domain_error("simulate_regression_path: nu must be > 0");
    regressors.validate();
    design.validate(regressors.dimension());
    const long steps = design.num_steps();
    const double h = design.h();

    PathSample path;
    path.design = design;
    path.has_truth = true;
    path.truth = theta0;
    path.times.resize(steps + 1);
    path.covariates.resize(steps + 1);
    path.responses.resize(steps + 1);

    const bool use_ou = regressors.append_ou ||
                        regressors.kind == RegressorSpec::Kind::diffusion_ou;
    std::vector<double> ou;
    if (use_ou)
        ou = simulate_diffusion_covariate(regressors.ou_rate, regressors.ou_vol,
                                          regressors.ou_start, design,
                                          substream_seed(seed, kWienerStream));

    const std::vector<double> draws =
        (theta0.sigma > 0.0 && steps > 0)
            ? sample_increments(table, steps, substream_seed(seed, kLevyStream))
            : std::vector<double>();

    if (theta0.q() != regressors.dimension())
        throw std::invalid_argument("simulate_regression_path: mu dimension mismatch");

    double levy = 0.0;  // J_{t_j}
    for (long j = 0; j <= steps; ++j) {
        const double t = static_cast<double>(j) * h;
        path.times[j] = t;
        std::vector<double> x = deterministic_regressors(regressors, t);
        if (use_ou) x.push_back(ou[j]);
        if (j > 0 && !draws.empty()) levy += h * draws[j - 1];
        double trend = 0.0;
        for (std::size_t k = 0; k < x.size(); ++k) trend += x[k] * theta0.mu[k];
        path.responses[j] = trend + theta0.sigma * levy;
        path.covariates[j] = std::move(x);
    }
    return path;
}

PathSample simulate_sde_path(const std::vector<double>& mu0, double sigma0,
                             double nu0,
                             const std::function<std::vector<double>(double)>& drift,
                             const SamplingDesign& design, const DensityTable& table,
                             std::uint64_t seed) {
    if (!(sigma0 > 0.0)) throw std::domain_error("simulate_sde_path: sigma0 must be > 0");
    if (!(nu0 > 0.0)) throw std::domain_error("simulate_sde_path: nu0 must be > 0");
    design.validate(mu0.size());
    const long steps = design.num_steps();
    const double h = design.h();

    PathSample path;
    path.design = design;
    path.covariates_are_drift = true;
    path.has_truth = true;
    path.truth = Theta{mu0, sigma0, nu0};
    path.times.resize(steps + 1);
    path.covariates.resize(steps + 1);
    path.responses.resize(steps + 1);

    const std::vector<double> draws =
        steps > 0 ? sample_increments(table, steps, substream_seed(seed, kLevyStream))
                  : std::vector<double>();

    double y = 0.0;
    for (long j = 0; j <= steps; ++j) {
        path.times[j] = static_cast<double>(j) * h;
        std::vector<double> b = drift(y);
        if (b.size() != mu0.size())
            throw std::invalid_argument("simulate_sde_path: drift dimension mismatch");
        for (double v : b)
            if (!std::isfinite(v))
                throw std::domain_error("simulate_sde_path: drift returned non-finite value");
        path.responses[j] = y;
        path.covariates[j] = b;
        if (j < steps) {
            double inc = 0.0;
            for (std::size_t k = 0; k < b.size(); ++k) inc += mu0[k] * b[k];
            y += h * inc + sigma0 * h * draws[j];
        }
    }
    return path;
}

std::vector<double> simulate_diffusion_covariate(double rate, double vol, double start,
                                                 const SamplingDesign& design,
                                                 std::uint64_t seed,
                                                 std::vector<double>* derivative_out) {
    if (!(rate > 0.0)) throw std::domain_error("simulate_diffusion_covariate: rate must be > 0");
    if (vol < 0.0) throw std::domain_error("simulate_diffusion_covariate: vol must be >= 0");
    const long steps = design.num_steps();
    const double h = design.h();
    const double sqrt_h = std::sqrt(h);

    std::mt19937_64 rng{seed};
    std::vector<double> deriv(steps + 1);
    std::vector<double> integral(steps + 1);
    deriv[0] = start;
    integral[0] = 0.0;
    for (long j = 1; j <= steps; ++j) {
        // 53-bit uniforms -> Box-Muller keeps the stream byte-reproducible.
        const double u1 = (static_cast<double>(rng() >> 11) + 0.5) * 0x1p-53;
        const double u2 = (static_cast<double>(rng() >> 11) + 0.5) * 0x1p-53;
        const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
        deriv[j] = deriv[j - 1] - rate * deriv[j - 1] * h + vol * sqrt_h * z;
        integral[j] = integral[j - 1] + 0.5 * h * (deriv[j - 1] + deriv[j]);
    }
    if (derivative_out) *derivative_out = deriv;
    return integral;
}

}  // namespace tlevy
