#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "tlevy/inference.hpp"
#include "tlevy/mc.hpp"

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

tlevy::McConfig small_config() {
    tlevy::McConfig c;
    c.theta0 = tlevy::Theta{{5.0, -1.0}, 3.0, 1.0};
    c.design = {50, 20.0, 5.0};
    c.replications = 24;
    c.master_seed = 2718;
    c.mass_tolerance = 0.05;
    return c;
}

}  // namespace

TEST_CASE("ks_statistic reference samples") {
    double d, p;

    std::vector<double> ideal(1000);
    for (int i = 0; i < 1000; ++i)
        ideal[i] = tlevy::normal_quantile((i + 0.5) / 1000.0);
    tlevy::ks_statistic(ideal, d, p);
    CHECK(d <= 0.5 / 1000.0 + 1e-9);
    CHECK(p > 0.999);

    tlevy::ks_statistic({0.0}, d, p);
    CHECK(d == doctest::Approx(0.5).epsilon(1e-12));

    tlevy::ks_statistic(std::vector<double>(50, 10.0), d, p);
    CHECK(d > 0.999);
    CHECK(p < 1e-6);

    CHECK_THROWS_AS(tlevy::ks_statistic({}, d, p), std::domain_error);
}

TEST_CASE("run_mc determinism and worker invariance") {
    tlevy::McConfig c = small_config();
    c.parallelism = 1;
    const tlevy::McSummary one = tlevy::run_mc(c);
    c.parallelism = 8;
    const tlevy::McSummary eight = tlevy::run_mc(c);

    CHECK(one.replications == c.replications);
    CHECK(one.failures == eight.failures);
    REQUIRE(one.parameters.size() == 4);
    CHECK(one.parameters[0].name == "mu_1");
    CHECK(one.parameters[3].name == "nu");
    for (std::size_t k = 0; k < 4; ++k) {
        REQUIRE(one.parameters[k].studentized.size() ==
                eight.parameters[k].studentized.size());
        for (std::size_t i = 0; i < one.parameters[k].studentized.size(); ++i)
            CHECK(one.parameters[k].studentized[i] ==
                  eight.parameters[k].studentized[i]);
        CHECK(one.parameters[k].ks_statistic == eight.parameters[k].ks_statistic);
    }
    // bookkeeping: replications = successes + failures
    CHECK(one.parameters[0].studentized.size() + one.failures ==
          static_cast<std::size_t>(one.replications));
    CHECK(one.log_sigma_studentized == eight.log_sigma_studentized);
}

TEST_CASE("write_mc_outputs regenerates identical bytes") {
    tlevy::McConfig c = small_config();
    const tlevy::McSummary s = tlevy::run_mc(c);
    tlevy::write_mc_outputs(s, c, "mc_golden_a");
    tlevy::write_mc_outputs(s, c, "mc_golden_b");
    for (const char* f :
         {"summary.json", "studentized.csv", "hist_mu_1.csv", "hist_mu_2.csv",
          "hist_sigma.csv", "hist_nu.csv"}) {
        const std::string a = slurp(std::string("mc_golden_a/") + f);
        const std::string b = slurp(std::string("mc_golden_b/") + f);
        CHECK(!a.empty());
        CHECK(a == b);
    }
    // studentized.csv has one row per success plus the header
    const std::string st = slurp("mc_golden_a/studentized.csv");
    const long rows = static_cast<long>(std::count(st.begin(), st.end(), '\n'));
    CHECK(rows == static_cast<long>(s.parameters[0].studentized.size()) + 1);
}

TEST_CASE("run_mc validates its configuration") {
    tlevy::McConfig c = small_config();
    c.replications = 0;
    CHECK_THROWS_AS(tlevy::run_mc(c), std::domain_error);
    c = small_config();
    c.theta0.sigma = -1.0;
    CHECK_THROWS_AS(tlevy::run_mc(c), std::domain_error);
    c = small_config();
    c.design.thin_horizon = 50.0;  // B_n > T_n
    CHECK_THROWS_AS(tlevy::run_mc(c), std::domain_error);
}
