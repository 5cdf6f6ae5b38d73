#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "tlevy/cqmle.hpp"
#include "tlevy/density_table.hpp"
#include "tlevy/inference.hpp"
#include "tlevy/mc.hpp"
#include "tlevy/path_io.hpp"
#include "tlevy/rng.hpp"
#include "tlevy/simulate.hpp"
#include "tlevy/tqmle.hpp"

namespace {

using nlohmann::json;

int fail(const std::vector<std::string>& errors) {
    json j;
    j["error"] = errors;
    std::cerr << j.dump(2) << "\n";
    return 1;
}

struct DesignFlags {
    int n = 100;
    double horizon = 100.0;
    double thin = 10.0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--n", n, "steps per unit time (h = 1/n)");
        cmd->add_option("--T", horizon, "sampling horizon T_n");
        cmd->add_option("--B", thin, "thinning horizon B_n for stage one");
    }
    std::vector<std::string> validate() const {
        std::vector<std::string> errs;
        if (n < 1) errs.push_back("n: must be >= 1");
        if (!(horizon > 0.0)) errs.push_back("T: must be > 0");
        if (!(thin > 0.0)) errs.push_back("B: must be > 0");
        if (thin > horizon) errs.push_back("B: thinning horizon B_n must satisfy B_n <= T_n");
        return errs;
    }
    tlevy::SamplingDesign design() const { return {n, horizon, thin}; }
};

struct ThetaFlags {
    std::vector<double> mu{5.0, -1.0};
    double sigma = 3.0;
    double nu = 1.0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--mu", mu, "trend coefficients");
        cmd->add_option("--sigma", sigma, "scale sigma > 0");
        cmd->add_option("--nu", nu, "degrees of freedom nu > 0");
    }
    std::vector<std::string> validate() const {
        std::vector<std::string> errs;
        if (!(sigma > 0.0)) errs.push_back("sigma: must be > 0");
        if (!(nu > 0.0)) errs.push_back("nu: must be > 0");
        if (mu.empty()) errs.push_back("mu: need at least one coefficient");
        return errs;
    }
    tlevy::Theta theta() const { return {mu, sigma, nu}; }
};

tlevy::RegressorSpec make_regressors(const std::string& kind,
                                     const std::vector<double>& freqs) {
    tlevy::RegressorSpec spec;
    if (kind == "periodic_pair") {
        spec.kind = tlevy::RegressorSpec::Kind::periodic_pair;
    } else if (kind == "custom_periodic") {
        spec.kind = tlevy::RegressorSpec::Kind::custom_periodic;
        spec.frequencies = freqs;
    } else {
        throw CLI::ValidationError("regressors", "unknown regressor kind: " + kind);
    }
    return spec;
}

json fit_to_json(const tlevy::FitResult& fr) {
    json j;
    j["mu_hat"] = std::vector<double>(fr.stage1.mu_hat.begin(), fr.stage1.mu_hat.end());
    j["sigma_hat"] = fr.stage1.sigma_hat;
    j["nu_hat"] = fr.stage2.nu_hat;
    j["mbar"] = fr.stage2.mbar;
    j["gradient_norm"] = fr.stage1.gradient_norm;
    j["iterations"] = fr.stage1.iterations;
    j["converged"] = fr.stage1.converged && fr.stage2.converged;
    switch (fr.stage2.boundary_flag) {
        case tlevy::NuBoundary::none: j["boundary_flag"] = "none"; break;
        case tlevy::NuBoundary::lower: j["boundary_flag"] = "lower"; break;
        case tlevy::NuBoundary::upper: j["boundary_flag"] = "upper"; break;
    }
    const long q = fr.stage1.mu_hat.size();
    std::vector<std::vector<double>> hess(q + 1, std::vector<double>(q + 1));
    std::vector<std::vector<double>> gamma(q + 1, std::vector<double>(q + 1));
    for (long r = 0; r < q + 1; ++r)
        for (long c = 0; c < q + 1; ++c) {
            hess[r][c] = fr.stage1.hessian(r, c);
            gamma[r][c] = fr.gamma_a(r, c);
        }
    j["hessian"] = hess;
    j["gamma_a"] = gamma;
    j["gamma_nu"] = fr.gamma_nu;
    j["balance_warning"] = fr.balance_warning;
    j["ci_level"] = fr.ci_level;
    json cis = json::array();
    for (const auto& ci : fr.ci) cis.push_back({ci.lower, ci.upper});
    j["ci"] = cis;
    if (fr.studentized) {
        j["studentized"] =
            std::vector<double>(fr.studentized->begin(), fr.studentized->end());
        j["log_sigma_studentized"] = *fr.log_sigma_studentized;
    }
    return j;
}

std::ostream& open_or_stdout(std::ofstream& file, const std::string& path) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path);
    if (!file) throw std::runtime_error("cannot open output file: " + path);
    return file;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-stage quasi-likelihood analysis of the Student-t Levy regression model"};
    app.require_subcommand(1);
    // "--h" (step size) below would clash with the default "-h" help alias.
    app.set_help_flag("--help", "print help and exit");
    app.set_config("--config", "",
                   "INI config file; put keys under a [subcommand] section, e.g. [mc]");

    // density
    auto* density = app.add_subcommand("density", "tabulate the law of h^{-1} J_h as CSV");
    double d_nu = 1.0, d_h = 0.005, d_xmax = 50.0, d_umax = 40.0, d_mass_tol = 0.05;
    long d_points = 8192, d_upoints = 16384;
    std::string d_method = "auto", d_out;
    density->add_option("--nu", d_nu, "degrees of freedom");
    density->add_option("--h", d_h, "step size in (0,1]");
    density->add_option("--x-max", d_xmax, "symmetric grid bound");
    density->add_option("--points", d_points, "grid points");
    density->add_option("--u-max", d_umax, "CF truncation bound (quadrature)");
    density->add_option("--u-points", d_upoints, "quadrature nodes");
    density->add_option("--mass-tol", d_mass_tol, "allowed total-mass deviation");
    density->add_option("--method", d_method, "auto|quadrature|fft");
    density->add_option("--out", d_out, "output CSV (default stdout)");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "simulate a regression path as CSV");
    DesignFlags s_design;
    ThetaFlags s_theta;
    std::uint64_t s_seed = 1;
    std::string s_reg_kind = "periodic_pair", s_out;
    std::vector<double> s_freqs;
    s_design.attach(simulate);
    s_theta.attach(simulate);
    simulate->add_option("--seed", s_seed, "RNG seed");
    simulate->add_option("--regressors", s_reg_kind, "periodic_pair|custom_periodic");
    simulate->add_option("--frequencies", s_freqs, "frequencies for custom_periodic");
    simulate->add_option("--mass-tol", d_mass_tol, "density-table mass tolerance");
    simulate->add_option("--out", s_out, "output CSV (default stdout)");

    // fit
    auto* fit = app.add_subcommand("fit", "two-stage fit of a path CSV; JSON output");
    std::string f_in, f_out;
    bool f_use_truth = false;
    double f_B = 0.0;
    fit->add_option("--path", f_in, "input path CSV")->required();
    fit->add_option("--out", f_out, "output JSON (default stdout)");
    fit->add_option("--B", f_B, "override thinning horizon B_n");
    fit->add_flag("--use-truth", f_use_truth,
                  "studentize against the truth recorded in the CSV header");

    // mc
    auto* mc = app.add_subcommand("mc", "replicated simulate/fit/studentize experiment");
    DesignFlags m_design;
    ThetaFlags m_theta;
    long m_reps = 300;
    std::uint64_t m_seed = 1;
    int m_jobs = 1;
    double m_mass_tol = 1e-4;
    std::string m_out_dir = "mc_out", m_reg_kind = "periodic_pair";
    std::vector<double> m_freqs;
    m_design.attach(mc);
    m_theta.attach(mc);
    mc->add_option("--reps", m_reps, "replications");
    mc->add_option("--seed", m_seed, "master seed");
    mc->add_option("--jobs", m_jobs, "worker count");
    mc->add_option("--mass-tol", m_mass_tol, "density-table mass tolerance");
    mc->add_option("--regressors", m_reg_kind, "periodic_pair|custom_periodic");
    mc->add_option("--frequencies", m_freqs, "frequencies for custom_periodic");
    mc->add_option("--out-dir", m_out_dir, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (density->parsed()) {
            std::vector<std::string> errs;
            if (!(d_nu > 0.0)) errs.push_back("nu: must be > 0");
            if (!(d_h > 0.0) || d_h > 1.0) errs.push_back("h: must be in (0,1]");
            if (!errs.empty()) return fail(errs);
            tlevy::GridSpec grid;
            grid.x_max = d_xmax;
            grid.x_min = -d_xmax;
            grid.points = d_points;
            grid.u_max = d_umax;
            grid.u_points = d_upoints;
            tlevy::InversionMethod method = tlevy::InversionMethod::automatic;
            if (d_method == "quadrature") method = tlevy::InversionMethod::quadrature;
            else if (d_method == "fft") method = tlevy::InversionMethod::fft;
            else if (d_method != "auto") return fail({"method: unknown value " + d_method});
            const tlevy::DensityTable table =
                tlevy::build_density_table(d_nu, d_h, grid, d_mass_tol, method);
            std::ofstream file;
            tlevy::write_density_csv(table, open_or_stdout(file, d_out));
        } else if (simulate->parsed()) {
            auto errs = s_design.validate();
            auto terr = s_theta.validate();
            errs.insert(errs.end(), terr.begin(), terr.end());
            if (!errs.empty()) return fail(errs);
            const tlevy::RegressorSpec reg = make_regressors(s_reg_kind, s_freqs);
            const tlevy::DensityTable table = tlevy::build_density_table(
                s_theta.nu, s_design.design().h(),
                tlevy::default_sampling_grid(s_theta.nu, s_design.design().h()),
                d_mass_tol);
            const tlevy::PathSample path = tlevy::simulate_regression_path(
                s_theta.theta(), s_design.design(), reg, table, s_seed);
            std::ofstream file;
            tlevy::write_path_csv(path, open_or_stdout(file, s_out));
        } else if (fit->parsed()) {
            std::ifstream in(f_in);
            if (!in) return fail({"path: cannot open " + f_in});
            tlevy::PathSample path = tlevy::read_path_csv(in);
            if (f_B > 0.0) path.design.thin_horizon = f_B;
            const tlevy::SamplingDesign design = path.design;
            const tlevy::CqmleFit s1 = tlevy::fit_cqmle(path, design);
            const tlevy::ResidualSet rs =
                tlevy::unit_residuals(path, s1.mu_hat, s1.sigma_hat);
            const tlevy::TqmleFit s2 = tlevy::fit_tqmle(rs);
            std::optional<tlevy::Theta> theta0;
            if (f_use_truth) {
                if (!path.has_truth)
                    return fail({"use-truth: input CSV carries no truth header"});
                theta0 = path.truth;
            }
            const tlevy::FitResult fr = tlevy::studentize(s1, s2, path, design, theta0);
            std::ofstream file;
            open_or_stdout(file, f_out) << fit_to_json(fr).dump(2) << "\n";
        } else if (mc->parsed()) {
            auto errs = m_design.validate();
            auto terr = m_theta.validate();
            errs.insert(errs.end(), terr.begin(), terr.end());
            if (m_reps < 1) errs.push_back("reps: must be >= 1");
            if (m_jobs < 1) errs.push_back("jobs: must be >= 1");
            if (!errs.empty()) return fail(errs);
            tlevy::McConfig config;
            config.theta0 = m_theta.theta();
            config.design = m_design.design();
            config.regressors = make_regressors(m_reg_kind, m_freqs);
            config.replications = m_reps;
            config.master_seed = m_seed;
            config.parallelism = m_jobs;
            config.mass_tolerance = m_mass_tol;
            const tlevy::McSummary summary = tlevy::run_mc(config);
            tlevy::write_mc_outputs(summary, config, m_out_dir);
            std::cout << "wrote " << m_out_dir << "/summary.json ("
                      << summary.replications - summary.failures << " successes, "
                      << summary.failures << " failures)\n";
        }
    } catch (const std::exception& ex) {
        return fail({ex.what()});
    }
    return 0;
}
