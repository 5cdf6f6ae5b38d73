#include "tlevy/density_table.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include "tlevy/specfun.hpp"

namespace tlevy {

namespace {

double log_cf_unit(double u, double nu) {
    const double au = std::fabs(u);
    if (au == 0.0) return 0.0;
    const double r = 0.5 * nu;
    // log phi(u) = (1 - nu/2) log 2 - log Gamma(nu/2)
    //              + (nu/2) log|u| + log K_{nu/2}(|u|)
    // with K expressed through its scaled form to stay finite for large |u|.
    return (1.0 - r) * std::log(2.0) - log_gamma(r) + r * std::log(au) +
           std::log(bessel_k_scaled(r, au)) - au;
}

bool is_power_of_two(long v) { return v > 0 && (v & (v - 1)) == 0; }

// In-place iterative radix-2 complex FFT (forward, e^{-2 pi i jk/N}).
void fft_radix2(std::vector<std::complex<double>>& a) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * M_PI / static_cast<double>(len);
        const std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = a[i + k];
                const std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

std::vector<double> invert_quadrature(double nu, double h, const GridSpec& grid) {
    const long m = grid.u_points;
    const double du = grid.u_max / static_cast<double>(m - 1);
    std::vector<double> envelope(m);
    bool dead = false;
    for (long k = 0; k < m; ++k) {
        if (dead) {
            envelope[k] = 0.0;
            continue;
        }
        const double lc = log_cf_rescaled(k * du, nu, h);
        envelope[k] = std::exp(lc);
        if (lc < -45.0) dead = true;
    }
    // Composite Simpson weights (trapezoid boundary terms are visible at the
    // target accuracy). The envelope is ~0 at the tail, so an odd interval
    // count only perturbs weights in the dead region.
    for (long k = 0; k < m; ++k) {
        const double w = (k == 0 || k == m - 1) ? 1.0 / 3.0
                         : (k % 2 == 1)         ? 4.0 / 3.0
                                                : 2.0 / 3.0;
        envelope[k] *= w;
    }

    std::vector<double> pdf(grid.points);
    const double dx = grid.dx();
    for (long i = 0; i < grid.points; ++i) {
        const double x = grid.x_min + i * dx;
        // cos(k du x) by the two-term recurrence; no trig calls in the loop.
        const double c1 = std::cos(du * x);
        double prev = 1.0, cur = c1;
        double sum = envelope[0] + envelope[1] * cur;
        for (long k = 2; k < m; ++k) {
            const double next = 2.0 * c1 * cur - prev;
            prev = cur;
            cur = next;
            sum += envelope[k] * cur;
        }
        pdf[i] = sum * du / M_PI;
    }
    return pdf;
}

std::vector<double> invert_fft(double nu, double h, const GridSpec& grid) {
    const long n = grid.points - 1;  // 2^k intervals, symmetric grid
    const double dx = grid.dx();
    const double du = 2.0 * M_PI / (n * dx);

    std::vector<std::complex<double>> a(static_cast<std::size_t>(n), 0.0);
    bool dead = false;
    for (long k = 0; k < n && !dead; ++k) {
        const double lc = log_cf_rescaled(k * du, nu, h);
        double w = (k == 0) ? 0.5 : 1.0;
        const double val = w * std::exp(lc);
        a[k] = (k % 2 == 0) ? val : -val;
        if (lc < -45.0) dead = true;
    }
    fft_radix2(a);

    std::vector<double> pdf(grid.points);
    for (long j = 0; j < n; ++j) pdf[j] = a[j].real() * du / M_PI;
    pdf[n] = pdf[0];  // x = +x_max mirrors x = -x_max
    return pdf;
}

}  // namespace

void GridSpec::validate() const {
    if (!(x_min < 0.0) || !(x_max > 0.0))
        throw std::domain_error("GridSpec: need x_min < 0 < x_max");
    if (points < 64) throw std::domain_error("GridSpec: points must be >= 64");
    if (!(u_max > 0.0)) throw std::domain_error("GridSpec: u_max must be > 0");
    if (u_points < 256) throw std::domain_error("GridSpec: u_points must be >= 256");
}

double cf_unit(double u, double nu) {
    if (!(nu > 0.0) || !std::isfinite(nu))
        throw std::domain_error("cf_unit: nu must be > 0");
    if (!std::isfinite(u)) throw std::domain_error("cf_unit: u must be finite");
    return std::exp(log_cf_unit(u, nu));
}

double log_cf_rescaled(double u, double nu, double h) {
    if (!(nu > 0.0) || !std::isfinite(nu))
        throw std::domain_error("log_cf_rescaled: nu must be > 0");
    if (!(h > 0.0) || h > 1.0)
        throw std::domain_error("log_cf_rescaled: h must be in (0,1]");
    if (!std::isfinite(u)) throw std::domain_error("log_cf_rescaled: u must be finite");
    return h * log_cf_unit(u / h, nu);
}

GridSpec default_sampling_grid(double nu, double h) {
    (void)h;
    GridSpec g;
    // Cauchy-like tails (nu <= 1.5) need a wide grid before the truncated
    // mass drops to ~1e-4; lighter tails allow a narrower, finer one.
    const long n = (nu <= 1.5) ? (1L << 21) : (1L << 19);
    g.x_max = (nu <= 1.5) ? 8192.0 : 2048.0;
    g.x_min = -g.x_max;
    g.points = n + 1;
    g.u_max = M_PI / g.dx();
    g.u_points = n / 2;
    return g;
}

DensityTable build_density_table(double nu, double h, const GridSpec& grid,
                                 double mass_tolerance, InversionMethod method) {
    grid.validate();
    if (!(nu > 0.0)) throw std::domain_error("build_density_table: nu must be > 0");
    if (!(h > 0.0) || h > 1.0)
        throw std::domain_error("build_density_table: h must be in (0,1]");

    const long n_intervals = grid.points - 1;
    const bool symmetric = std::fabs(grid.x_min + grid.x_max) <= 1e-9 * grid.x_max;
    bool use_fft;
    switch (method) {
        case InversionMethod::fft:
            use_fft = true;
            break;
        case InversionMethod::quadrature:
            use_fft = false;
            break;
        default:
            use_fft = symmetric && is_power_of_two(n_intervals) &&
                      n_intervals >= (1L << 16);
    }
    if (use_fft && (!symmetric || !is_power_of_two(n_intervals)))
        throw std::invalid_argument(
            "build_density_table: fft inversion needs a symmetric grid with 2^k+1 points");

    const double u_trunc = use_fft ? M_PI / grid.dx() : grid.u_max;
    if (std::exp(log_cf_rescaled(u_trunc, nu, h)) > 1e-14)
        throw TruncationError(
            "build_density_table: characteristic function not negligible at u_max=" +
            std::to_string(u_trunc));

    DensityTable table;
    table.nu = nu;
    table.h = h;
    table.grid = grid;
    table.pdf = use_fft ? invert_fft(nu, h, grid) : invert_quadrature(nu, h, grid);

    const double dx = grid.dx();
    double clipped = 0.0, mass = 0.0;
    for (double& p : table.pdf) {
        if (p < 0.0) {
            clipped -= p * dx;
            p = 0.0;
        }
        mass += p * dx;
    }
    table.clipped_mass = clipped;
    table.total_mass = mass;
    if (clipped > 1e-6)
        throw MassError("build_density_table: clipped negative mass " +
                        std::to_string(clipped) + " exceeds 1e-6");
    if (std::fabs(mass - 1.0) > mass_tolerance)
        throw MassError("build_density_table: total mass " + std::to_string(mass) +
                        " outside 1 +/- " + std::to_string(mass_tolerance));

    // Trapezoid CDF with the symmetry anchor: shift the raw sums so the
    // value at x = 0 is exactly 1/2 (removes any median bias); the truncated
    // tail mass stays at the grid edges.
    table.cdf.resize(grid.points);
    double acc = 0.0;
    table.cdf[0] = 0.0;
    for (long j = 1; j < grid.points; ++j) {
        acc += 0.5 * (table.pdf[j - 1] + table.pdf[j]) * dx;
        table.cdf[j] = acc;
    }
    // Raw left-sum value at x = 0 by linear interpolation.
    const double pos0 = (0.0 - grid.x_min) / dx;
    const long j0 = std::min<long>(static_cast<long>(pos0), grid.points - 2);
    const double frac0 = pos0 - j0;
    const double f_at_0 = table.cdf[j0] + frac0 * (table.cdf[j0 + 1] - table.cdf[j0]);
    const double total = acc;
    if (!(f_at_0 > 0.0) || !(total - f_at_0 > 0.0))
        throw MassError("build_density_table: degenerate mass split at x=0");
    for (long j = 0; j < grid.points; ++j)
        table.cdf[j] = std::clamp(table.cdf[j] - f_at_0 + 0.5, 0.0, 1.0);
    return table;
}

double cdf_eval(const DensityTable& table, double x) {
    const GridSpec& g = table.grid;
    if (x <= g.x_min) return 0.0;
    if (x >= g.x_max) return 1.0;
    const double dx = g.dx();
    const double pos = (x - g.x_min) / dx;
    long j = static_cast<long>(pos);
    if (j > g.points - 2) j = g.points - 2;
    const double xj = g.x_min + j * dx;
    const double xj1 = xj + dx;
    if (xj < 0.0 && xj1 > 0.0) {
        // The cell straddling the origin carries the symmetry anchor
        // (0, 1/2) as an extra knot so cdf_eval(0) is exactly 1/2 even
        // when no grid node falls on the origin.
        if (x <= 0.0)
            return table.cdf[j] + (x - xj) / (0.0 - xj) * (0.5 - table.cdf[j]);
        return 0.5 + x / (xj1 - 0.0) * (table.cdf[j + 1] - 0.5);
    }
    const double frac = pos - j;
    return table.cdf[j] + frac * (table.cdf[j + 1] - table.cdf[j]);
}

double quantile(const DensityTable& table, double p) {
    if (!(p > 0.0) || !(p < 1.0))
        throw std::domain_error("quantile: p must be in (0,1)");
    const auto& cdf = table.cdf;
    if (p <= cdf.front()) return table.grid.x_min;
    if (p >= cdf.back()) return table.grid.x_max;
    // Bracket on the grid, then bisect the piecewise-linear interpolant.
    const auto it = std::lower_bound(cdf.begin(), cdf.end(), p);
    const long jhi = static_cast<long>(it - cdf.begin());
    const double dx = table.grid.dx();
    double lo = table.grid.x_min + (jhi - 1) * dx;
    double hi = table.grid.x_min + jhi * dx;
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double c = cdf_eval(table, mid);
        if (std::fabs(c - p) <= 1e-12) return mid;
        (c < p ? lo : hi) = mid;
        if (hi - lo < 1e-14 * (1.0 + std::fabs(lo))) break;
    }
    return 0.5 * (lo + hi);
}

std::vector<double> sample_increments(const DensityTable& table, long count,
                                      std::uint64_t seed) {
    if (count < 1) throw std::domain_error("sample_increments: count must be >= 1");
    std::mt19937_64 rng(seed);
    std::vector<double> out(count);
    // The tabulated CDF covers [cdf_min, cdf_max] (the truncated tail mass is
    // not representable on the grid); draw uniforms inside that range so the
    // inverse never lands on the grid edge.
    const double lo = table.cdf.front();
    const double hi = table.cdf.back();
    for (long i = 0; i < count; ++i) {
        // 53-bit uniform in (0,1); avoids the endpoints exactly.
        const double u01 = (static_cast<double>(rng() >> 11) + 0.5) * 0x1p-53;
        out[i] = quantile(table, lo + u01 * (hi - lo));
    }
    return out;
}

double l1_distance_to_cauchy(const DensityTable& table) {
    const double dx = table.grid.dx();
    double acc = 0.0;
    for (long j = 0; j < table.grid.points; ++j) {
        const double x = table.grid.x_min + j * dx;
        const double cauchy = 1.0 / (M_PI * (1.0 + x * x));
        acc += std::fabs(table.pdf[j] - cauchy) * dx;
    }
    return acc;
}

void write_density_csv(const DensityTable& table, std::ostream& out) {
    out << "# nu=" << table.nu << " h=" << table.h
        << " points=" << table.grid.points << " x_max=" << table.grid.x_max << "\n";
    out << "x,pdf,cdf\n";
    out.precision(17);
    const double dx = table.grid.dx();
    for (long j = 0; j < table.grid.points; ++j) {
        out << table.grid.x_min + j * dx << ',' << table.pdf[j] << ','
            << table.cdf[j] << '\n';
    }
}

}  // namespace tlevy
