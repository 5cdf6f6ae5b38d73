#include "tlevy/mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "tlevy/cqmle.hpp"
#include "tlevy/inference.hpp"
#include "tlevy/rng.hpp"
#include "tlevy/tqmle.hpp"

namespace tlevy {

void McConfig::validate() const {
    theta0.validate();
    regressors.validate();
    design.validate(regressors.dimension());
    if (replications < 1) throw std::domain_error("McConfig: replications must be >= 1");
    if (parallelism < 1) throw std::domain_error("McConfig: parallelism must be >= 1");
    if (theta0.q() != regressors.dimension())
        throw std::domain_error("McConfig: mu dimension does not match the regressors");
}

void ks_statistic(const std::vector<double>& values, double& d, double& p) {
    if (values.empty()) throw std::domain_error("ks_statistic: empty sample");
    std::vector<double> sorted(values);
    std::sort(sorted.begin(), sorted.end());
    const double m = static_cast<double>(sorted.size());
    d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = normal_cdf(sorted[i]);
        d = std::max(d, std::max(f - i / m, (i + 1) / m - f));
    }
    // Asymptotic Kolmogorov distribution with the small-sample correction.
    const double lambda = (std::sqrt(m) + 0.12 + 0.11 / std::sqrt(m)) * d;
    double q;
    if (lambda < 0.4) {
        // The alternating series converges too slowly here; use the
        // theta-function form, essentially 1 for such small lambda.
        const double t = M_PI * M_PI / (8.0 * lambda * lambda);
        double s = 0.0;
        for (int k = 1; k <= 20; k += 2) s += std::exp(-k * k * t);
        q = 1.0 - std::sqrt(2.0 * M_PI) / lambda * s;
    } else {
        q = 0.0;
        for (int k = 1; k <= 100; ++k) {
            const double term = 2.0 * ((k % 2 == 1) ? 1.0 : -1.0) *
                                std::exp(-2.0 * k * k * lambda * lambda);
            q += term;
            if (std::fabs(term) < 1e-12) break;
        }
    }
    p = std::clamp(q, 0.0, 1.0);
}

namespace {

struct RepResult {
    bool ok = false;
    Eigen::VectorXd studentized;
    double log_sigma = 0.0;
};

RepResult run_one(const McConfig& config, const DensityTable& table, long rep) {
    RepResult res;
    try {
        const std::uint64_t seed = substream_seed(config.master_seed, rep);
        const PathSample path = simulate_regression_path(config.theta0, config.design,
                                                         config.regressors, table, seed);
        const CqmleFit s1 = fit_cqmle(path, config.design);
        if (!s1.converged) return res;
        const ResidualSet rs = unit_residuals(path, s1.mu_hat, s1.sigma_hat);
        const TqmleFit s2 = fit_tqmle(rs);
        if (!s2.converged || s2.boundary_flag != NuBoundary::none) return res;
        const FitResult fr =
            studentize(s1, s2, path, config.design, config.theta0);
        res.studentized = *fr.studentized;
        res.log_sigma = *fr.log_sigma_studentized;
        res.ok = true;
    } catch (const std::exception&) {
        res.ok = false;
    }
    return res;
}

std::vector<HistogramBin> freedman_diaconis(const std::vector<double>& values) {
    std::vector<HistogramBin> bins;
    if (values.size() < 2) return bins;
    std::vector<double> sorted(values);
    std::sort(sorted.begin(), sorted.end());
    const std::size_t m = sorted.size();
    const double q1 = sorted[m / 4];
    const double q3 = sorted[(3 * m) / 4];
    double width = 2.0 * (q3 - q1) / std::cbrt(static_cast<double>(m));
    if (!(width > 0.0)) width = 1.0;
    const double lo = sorted.front();
    const double hi = sorted.back();
    const long nbins = std::max(1L, static_cast<long>(std::ceil((hi - lo) / width)));
    bins.resize(nbins);
    for (long b = 0; b < nbins; ++b) {
        bins[b].left = lo + b * width;
        bins[b].right = lo + (b + 1) * width;
    }
    for (double v : sorted) {
        long b = static_cast<long>((v - lo) / width);
        b = std::clamp(b, 0L, nbins - 1);
        ++bins[b].count;
    }
    return bins;
}

}  // namespace

McSummary run_mc(const McConfig& config) {
    config.validate();
    const DensityTable table =
        build_density_table(config.theta0.nu, config.design.h(),
                            default_sampling_grid(config.theta0.nu, config.design.h()),
                            config.mass_tolerance);

    std::vector<RepResult> results(config.replications);
    const int workers =
        std::max(1, std::min<int>(config.parallelism, config.replications));
    if (workers == 1) {
        for (long r = 0; r < config.replications; ++r)
            results[r] = run_one(config, table, r);
    } else {
        std::vector<std::thread> pool;
        std::atomic<long> next{0};
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&]() {
                for (long r = next.fetch_add(1); r < config.replications;
                     r = next.fetch_add(1))
                    results[r] = run_one(config, table, r);
            });
        }
        for (auto& t : pool) t.join();
    }

    const std::size_t q = config.theta0.q();
    McSummary summary;
    summary.replications = config.replications;
    summary.parameters.resize(q + 2);
    for (std::size_t k = 0; k < q; ++k)
        summary.parameters[k].name = "mu_" + std::to_string(k + 1);
    summary.parameters[q].name = "sigma";
    summary.parameters[q + 1].name = "nu";

    for (const RepResult& r : results) {
        if (!r.ok) {
            ++summary.failures;
            continue;
        }
        for (std::size_t k = 0; k < q + 2; ++k)
            summary.parameters[k].studentized.push_back(r.studentized[k]);
        summary.log_sigma_studentized.push_back(r.log_sigma);
    }
    if (static_cast<double>(summary.failures) >
        config.max_failure_rate * static_cast<double>(config.replications))
        throw std::runtime_error("run_mc: failure rate above " +
                                 std::to_string(config.max_failure_rate));

    for (ParameterSummary& ps : summary.parameters) {
        const std::vector<double>& v = ps.studentized;
        if (v.empty()) continue;
        const double m = static_cast<double>(v.size());
        double mean = 0.0;
        for (double x : v) mean += x;
        mean /= m;
        double var = 0.0;
        for (double x : v) var += (x - mean) * (x - mean);
        ps.mean = mean;
        ps.sd = (v.size() > 1) ? std::sqrt(var / (m - 1.0)) : 0.0;
        ks_statistic(v, ps.ks_statistic, ps.ks_pvalue);
        ps.histogram = freedman_diaconis(v);
    }
    return summary;
}

void write_mc_outputs(const McSummary& summary, const McConfig& config,
                      const std::string& directory) {
    namespace fs = std::filesystem;
    fs::create_directories(directory);

    nlohmann::json j;
    j["replications"] = summary.replications;
    j["failures"] = summary.failures;
    j["master_seed"] = config.master_seed;
    j["design"] = {{"n", config.design.n},
                   {"T", config.design.horizon},
                   {"B", config.design.thin_horizon}};
    for (const ParameterSummary& ps : summary.parameters) {
        j["parameters"][ps.name] = {{"mean", ps.mean},
                                    {"sd", ps.sd},
                                    {"ks_statistic", ps.ks_statistic},
                                    {"ks_pvalue", ps.ks_pvalue}};
    }
    std::ofstream(fs::path(directory) / "summary.json") << j.dump(2) << "\n";

    std::ofstream st(fs::path(directory) / "studentized.csv");
    st.precision(17);
    for (std::size_t k = 0; k < summary.parameters.size(); ++k)
        st << (k ? "," : "") << summary.parameters[k].name;
    st << "\n";
    if (!summary.parameters.empty()) {
        const std::size_t rows = summary.parameters.front().studentized.size();
        for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t k = 0; k < summary.parameters.size(); ++k)
                st << (k ? "," : "") << summary.parameters[k].studentized[r];
            st << "\n";
        }
    }

    for (const ParameterSummary& ps : summary.parameters) {
        std::ofstream hf(fs::path(directory) / ("hist_" + ps.name + ".csv"));
        hf.precision(17);
        hf << "bin_left,bin_right,count\n";
        for (const HistogramBin& b : ps.histogram)
            hf << b.left << ',' << b.right << ',' << b.count << "\n";
    }
}

}  // namespace tlevy
