#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "tlevy/density_table.hpp"
#include "tlevy/specfun.hpp"

namespace {

double cauchy_pdf(double x) { return 1.0 / (M_PI * (1.0 + x * x)); }
double cauchy_cdf(double x) { return 0.5 + std::atan(x) / M_PI; }

tlevy::GridSpec narrow_grid() {
    tlevy::GridSpec g;
    g.x_min = -50.0;
    g.x_max = 50.0;
    g.points = 8192;
    g.u_max = 40.0;
    g.u_points = 16384;
    return g;
}

}  // namespace

TEST_CASE("cf_unit closed forms") {
    for (double nu : {0.5, 1.0, 2.0, 5.0}) CHECK(tlevy::cf_unit(0.0, nu) == 1.0);
    // nu = 1: K_{1/2} collapses the CF to e^{-|u|}
    for (double u : {0.25, 1.0, 3.0, 10.0})
        CHECK(tlevy::cf_unit(u, 1.0) == doctest::Approx(std::exp(-u)).epsilon(1e-12));
    // nu = 2 at u = 1: 2^0 / Gamma(1) * 1 * K_1(1)
    CHECK(tlevy::cf_unit(1.0, 2.0) ==
          doctest::Approx(0.60190723019723457).epsilon(1e-11));
    // symmetric and decreasing
    CHECK(tlevy::cf_unit(-2.0, 3.0) == doctest::Approx(tlevy::cf_unit(2.0, 3.0)));
    CHECK(tlevy::cf_unit(1.0, 3.0) > tlevy::cf_unit(2.0, 3.0));
}

TEST_CASE("log_cf_rescaled") {
    for (double nu : {0.5, 1.0, 2.0}) {
        for (double h : {1.0, 0.1, 0.005}) CHECK(tlevy::log_cf_rescaled(0.0, nu, h) == 0.0);
    }
    // Cauchy stability: exactly -|u| at nu=1 for every h
    for (double h : {1.0, 0.1, 0.01, 0.005}) {
        for (double u : {0.5, 1.0, 4.0, 20.0})
            CHECK(tlevy::log_cf_rescaled(u, 1.0, h) == doctest::Approx(-u).epsilon(1e-10));
    }
    // agrees with h * log cf_unit(u/h) where the latter does not underflow
    for (double nu : {0.5, 2.0, 3.0}) {
        const double direct = 0.1 * std::log(tlevy::cf_unit(2.0 / 0.1, nu));
        CHECK(tlevy::log_cf_rescaled(2.0, nu, 0.1) ==
              doctest::Approx(direct).epsilon(1e-10));
    }
    // h -> 0 limit approaches -|u|
    CHECK(std::fabs(tlevy::log_cf_rescaled(1.0, 3.0, 1e-4) + 1.0) < 1e-2);
}

TEST_CASE("density table: Cauchy oracle at nu=1") {
    for (double h : {1.0 / 50.0, 1.0 / 200.0}) {
        const tlevy::DensityTable t = tlevy::build_density_table(1.0, h, narrow_grid(), 0.05);
        double sup = 0.0, cdf_sup = 0.0;
        for (long i = 0; i < t.grid.points; ++i) {
            const double x = t.grid.x_min + i * t.grid.dx();
            sup = std::max(sup, std::fabs(t.pdf[i] - cauchy_pdf(x)));
            cdf_sup = std::max(cdf_sup, std::fabs(t.cdf[i] - cauchy_cdf(x)));
        }
        CHECK(sup <= 1e-6);
        CHECK(cdf_sup <= 1e-4);
    }
}

TEST_CASE("density table invariants on the (nu, h) lattice") {
    for (double nu : {0.5, 1.0, 2.0, 3.0, 5.0}) {
        for (double h : {1.0, 0.1, 0.01, 0.005}) {
            // heavy tails at nu < 1 leave visible mass beyond |x| = 50
            const double mass_tol = nu < 1.0 ? 0.2 : 0.05;
            const tlevy::DensityTable t =
                tlevy::build_density_table(nu, h, narrow_grid(), mass_tol);
            // probability mass within the configured tolerance
            CHECK(std::fabs(t.total_mass - 1.0) <= mass_tol);
            // symmetry
            double asym = 0.0;
            for (long i = 0; i < t.grid.points; ++i)
                asym = std::max(asym,
                                std::fabs(t.pdf[i] - t.pdf[t.grid.points - 1 - i]));
            CHECK(asym <= 1e-12);
            // nonnegative, anchored CDF
            CHECK(*std::min_element(t.pdf.begin(), t.pdf.end()) >= 0.0);
            CHECK(tlevy::cdf_eval(t, 0.0) == doctest::Approx(0.5).epsilon(1e-6));
            CHECK(std::is_sorted(t.cdf.begin(), t.cdf.end()));
        }
    }
}

TEST_CASE("fft and quadrature agree") {
    // Wide fft grid (aliasing pushed beyond |x| = 2048) versus a quadrature
    // grid whose nodes sit exactly on the fft lattice (dx = 4096 / 2^19).
    tlevy::GridSpec g;
    g.x_max = 2048.0;
    g.x_min = -2048.0;
    g.points = (1L << 19) + 1;
    g.u_max = 40.0;
    g.u_points = 16384;
    const tlevy::DensityTable f =
        tlevy::build_density_table(2.0, 0.01, g, 0.05, tlevy::InversionMethod::fft);
    tlevy::GridSpec q;
    q.x_max = 32.0;
    q.x_min = -32.0;
    q.points = 8193;
    q.u_max = 40.0;
    q.u_points = 16384;
    const tlevy::DensityTable s =
        tlevy::build_density_table(2.0, 0.01, q, 0.05, tlevy::InversionMethod::quadrature);
    REQUIRE(s.grid.dx() == doctest::Approx(f.grid.dx()).epsilon(1e-12));
    const long offset =
        static_cast<long>(std::llround((q.x_min - g.x_min) / f.grid.dx()));
    double worst = 0.0;
    for (long i = 0; i < s.grid.points; ++i)
        worst = std::max(worst, std::fabs(s.pdf[i] - f.pdf[offset + i]));
    CHECK(worst <= 1e-6);
}

TEST_CASE("cdf_eval and quantile") {
    const tlevy::DensityTable t =
        tlevy::build_density_table(1.0, 0.005, narrow_grid(), 0.05);
    CHECK(tlevy::cdf_eval(t, 0.0) == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(tlevy::cdf_eval(t, 1.0) == doctest::Approx(0.75).epsilon(1e-4));
    CHECK(tlevy::cdf_eval(t, t.grid.x_max + 1.0) == 1.0);
    CHECK(std::fabs(tlevy::quantile(t, 0.5)) <= t.grid.dx());
    CHECK(tlevy::quantile(t, 0.75) == doctest::Approx(1.0).epsilon(1e-3));
    for (double p = 0.01; p < 0.995; p += 0.01) {
        const double x = tlevy::quantile(t, p);
        CHECK(std::fabs(tlevy::cdf_eval(t, x) - p) <= 1e-8);
    }
}

TEST_CASE("sample_increments: determinism and law") {
    const tlevy::DensityTable t = tlevy::build_density_table(
        1.0, 0.005, tlevy::default_sampling_grid(1.0, 0.005), 0.05);
    const auto a = tlevy::sample_increments(t, 1000, 42);
    const auto b = tlevy::sample_increments(t, 1000, 42);
    CHECK(a == b);
    const auto c = tlevy::sample_increments(t, 1000, 43);
    CHECK(a != c);

    // KS against the standard Cauchy law (exact at nu = 1)
    auto draws = tlevy::sample_increments(t, 10000, 7);
    std::sort(draws.begin(), draws.end());
    double d = 0.0;
    const double m = static_cast<double>(draws.size());
    for (std::size_t i = 0; i < draws.size(); ++i) {
        const double f = cauchy_cdf(draws[i]);
        d = std::max(d, std::max(f - i / m, (i + 1) / m - f));
    }
    CHECK(d < 1.63 / std::sqrt(m));

    auto med = tlevy::sample_increments(t, 10001, 11);
    std::nth_element(med.begin(), med.begin() + 5000, med.end());
    CHECK(std::fabs(med[5000]) < 0.05);
}

TEST_CASE("l1 distance to Cauchy") {
    const auto dist = [](double nu, double h) {
        return tlevy::l1_distance_to_cauchy(
            tlevy::build_density_table(nu, h, narrow_grid(), 0.05));
    };
    for (double h : {1.0, 0.1, 0.005}) CHECK(dist(1.0, h) <= 1e-6);
    CHECK(dist(2.0, 1.0) > 0.0);
    const double d50 = dist(2.0, 1.0 / 50.0);
    const double d100 = dist(2.0, 1.0 / 100.0);
    const double d200 = dist(2.0, 1.0 / 200.0);
    CHECK(d200 < d100);
    CHECK(d100 < d50);
}

TEST_CASE("density CSV round trip text") {
    tlevy::GridSpec g = narrow_grid();
    g.points = 257;
    g.u_points = 4096;
    const tlevy::DensityTable t = tlevy::build_density_table(1.0, 0.01, g, 0.05);
    std::ostringstream out;
    tlevy::write_density_csv(t, out);
    std::istringstream in(out.str());
    std::string header;
    while (std::getline(in, header) && !header.empty() && header[0] == '#') {
    }
    CHECK(header == "x,pdf,cdf");
    long rows = 0;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == g.points);
}
