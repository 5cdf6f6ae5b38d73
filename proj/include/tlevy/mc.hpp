#ifndef TLEVY_MC_HPP
#define TLEVY_MC_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "tlevy/model.hpp"
#include "tlevy/simulate.hpp"

namespace tlevy {

struct McConfig {
    Theta theta0;
    SamplingDesign design;
    RegressorSpec regressors;
    long replications = 300;
    std::uint64_t master_seed = 1;
    int parallelism = 1;
    double mass_tolerance = 1e-4;
    double max_failure_rate = 0.2;

    void validate() const;
};

struct HistogramBin {
    double left = 0.0;
    double right = 0.0;
    long count = 0;
};

struct ParameterSummary {
    std::string name;
    std::vector<double> studentized;  // successes only, replication order
    double mean = 0.0;
    double sd = 0.0;
    double ks_statistic = 0.0;
    double ks_pvalue = 0.0;
    std::vector<HistogramBin> histogram;
};

struct McSummary {
    long replications = 0;
    long failures = 0;
    std::vector<ParameterSummary> parameters;  // mu_1..mu_q, sigma, nu
    std::vector<double> log_sigma_studentized;
};

/// Two-sided Kolmogorov-Smirnov statistic against N(0,1) with the
/// asymptotic p-value.
void ks_statistic(const std::vector<double>& values, double& d, double& p);

/// Replicated simulate -> fit -> studentize experiment. Deterministic given
/// the master seed and independent of the worker count.
McSummary run_mc(const McConfig& config);

/// summary.json, studentized.csv, hist_<param>.csv under `directory`.
void write_mc_outputs(const McSummary& summary, const McConfig& config,
                      const std::string& directory);

}  // namespace tlevy

#endif
