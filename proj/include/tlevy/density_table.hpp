#ifndef TLEVY_DENSITY_TABLE_HPP
#define TLEVY_DENSITY_TABLE_HPP

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <vector>

namespace tlevy {

struct TruncationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct MassError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Characteristic function of the unit-time law t_nu at u (real, in (0,1]).
double cf_unit(double u, double nu);

/// log of the characteristic function of the rescaled increment h^{-1} J_h,
/// i.e. h * log cf_unit(u / h). Computed fully in log space; <= 0, 0 at u=0.
double log_cf_rescaled(double u, double nu, double h);

/// Uniform grid on which the density of h^{-1} J_h is tabulated, plus the
/// resolution of the characteristic-function quadrature.
struct GridSpec {
    double x_min = -50.0;
    double x_max = 50.0;
    long points = 8192;
    double u_max = 40.0;   // CF truncation bound (quadrature path)
    long u_points = 16384; // quadrature resolution

    double dx() const { return (x_max - x_min) / (points - 1); }
    void validate() const;
};

/// Inversion backend. `quadrature` is the shared-node cosine transform over
/// [0, u_max]; `fft` maps the same integral through a radix-2 FFT and needs
/// a symmetric grid with points = 2^k + 1. `automatic` picks fft for such
/// grids with at least 2^16 intervals.
enum class InversionMethod { automatic, quadrature, fft };

/// Immutable grid representation of the law of h^{-1} J_h.
struct DensityTable {
    double nu = 1.0;
    double h = 1.0;
    GridSpec grid;
    std::vector<double> pdf;
    std::vector<double> cdf;
    double clipped_mass = 0.0;  // negative-lobe mass removed by clipping
    double total_mass = 0.0;    // sum pdf * dx before renormalisation
};

DensityTable build_density_table(double nu, double h, const GridSpec& grid,
                                 double mass_tolerance = 1e-4,
                                 InversionMethod method = InversionMethod::automatic);

/// Grid wide enough for inversion sampling: tails beyond x_max carry less
/// than ~1e-4 of mass even in the Cauchy-like regime. FFT-compatible.
GridSpec default_sampling_grid(double nu, double h);

/// Piecewise-linear interpolation of the tabulated CDF; clamps outside the grid.
double cdf_eval(const DensityTable& table, double x);

/// Inverse of cdf_eval by bisection: |cdf_eval(result) - p| <= 1e-8.
double quantile(const DensityTable& table, double p);

/// Inversion sampling: `count` i.i.d. draws, deterministic given the seed.
std::vector<double> sample_increments(const DensityTable& table, long count,
                                      std::uint64_t seed);

/// sum |pdf - cauchy_pdf| * dx over the grid; the local-limit diagnostic.
double l1_distance_to_cauchy(const DensityTable& table);

/// CSV with columns x,pdf,cdf (full round-trip precision).
void write_density_csv(const DensityTable& table, std::ostream& out);

}  // namespace tlevy

#endif
