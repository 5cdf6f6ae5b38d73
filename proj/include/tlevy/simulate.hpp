#ifndef TLEVY_SIMULATE_HPP
#define TLEVY_SIMULATE_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "tlevy/density_table.hpp"
#include "tlevy/model.hpp"

namespace tlevy {

/// Deterministic/stochastic covariate specification.
struct RegressorSpec {
    enum class Kind { periodic_pair, custom_periodic, diffusion_ou };
    Kind kind = Kind::periodic_pair;
    // periodic kinds: one frequency per regressor; component 2k is
    // cos(freq*t), component 2k+1 is sin(freq*t) for custom_periodic.
    // periodic_pair is the fixed pair (cos(5t), sin(t)).
    std::vector<double> frequencies;
    // diffusion_ou parameters
    double ou_rate = 1.0;
    double ou_vol = 1.0;
    double ou_start = 0.0;
    bool append_ou = false;  // add the integrated OU covariate after the periodic ones

    std::size_t dimension() const;
    void validate() const;
};

/// Y_{t_j} = X_{t_j} . mu0 + sigma0 * J_{t_j}, J built from i.i.d. rescaled
/// increments drawn from `table` (the law of h^{-1} J_h); each step adds
/// h * draw. Deterministic given the seed.
PathSample simulate_regression_path(const Theta& theta0, const SamplingDesign& design,
                                    const RegressorSpec& regressors,
                                    const DensityTable& table, std::uint64_t seed);

/// Euler scheme for Y_t = mu . int_0^t b(Y_s) ds + sigma J_t with bounded
/// drift b: R -> R^q. The covariate slot stores b(Y_{t_j}).
PathSample simulate_sde_path(const std::vector<double>& mu0, double sigma0,
                             double nu0,
                             const std::function<std::vector<double>(double)>& drift,
                             const SamplingDesign& design, const DensityTable& table,
                             std::uint64_t seed);

/// Euler-Maruyama OU path X' and its cumulative trapezoidal integral X.
/// Returns the integrated covariate values X_{t_j}; `derivative_out`, when
/// non-null, receives X'_{t_j}.
std::vector<double> simulate_diffusion_covariate(double rate, double vol, double start,
                                                 const SamplingDesign& design,
                                                 std::uint64_t seed,
                                                 std::vector<double>* derivative_out = nullptr);

}  // namespace tlevy

#endif
