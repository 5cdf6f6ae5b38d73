#ifndef TLEVY_MODEL_HPP
#define TLEVY_MODEL_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

namespace tlevy {

/// Model parameter triple (mu, sigma, nu).
struct Theta {
    std::vector<double> mu;
    double sigma = 1.0;
    double nu = 1.0;

    void validate() const {
        if (!(sigma > 0.0) || !std::isfinite(sigma))
            throw std::domain_error("Theta: sigma must be > 0");
        if (!(nu > 0.0) || !std::isfinite(nu))
            throw std::domain_error("Theta: nu must be > 0");
    }
    std::size_t q() const { return mu.size(); }
};

/// Sampling design: step count n (h = 1/n), horizon T_n, and the thinning
/// horizon B_n used by the first estimation stage. N_n = floor(n * B_n).
struct SamplingDesign {
    int n = 100;
    double horizon = 100.0;       // T_n
    double thin_horizon = 10.0;   // B_n

    double h() const { return 1.0 / n; }
    long num_steps() const { return static_cast<long>(std::floor(n * horizon)); }
    long thinned_count() const { return static_cast<long>(std::floor(n * thin_horizon)); }

    void validate(std::size_t q = 0) const {
        if (n < 1) throw std::domain_error("SamplingDesign: n must be >= 1");
        if (!(horizon > 0.0)) throw std::domain_error("SamplingDesign: horizon must be > 0");
        if (!(thin_horizon > 0.0) || thin_horizon > horizon)
            throw std::domain_error("SamplingDesign: need 0 < B_n <= T_n");
        if (thinned_count() < static_cast<long>(q) + 2)
            throw std::domain_error("SamplingDesign: N_n = floor(n*B_n) too small");
    }

    // Advisory only: the asymptotic balance conditions T_n/N_n -> 0 and
    // B_n/T_n -> 0 have no sharp finite-sample analogue.
    bool balance_warning() const {
        return thin_horizon / horizon > 0.5 ||
               horizon / static_cast<double>(thinned_count()) > 0.5;
    }
};

/// One simulated (or loaded) observation path on the h-grid.
struct PathSample {
    SamplingDesign design;
    std::vector<double> times;                  // t_j = j/n, j = 0..[nT_n]
    std::vector<std::vector<double>> covariates;  // X_{t_j} (or b(Y_{t_j})), length q each
    std::vector<double> responses;              // Y_{t_j}
    bool covariates_are_drift = false;  // SDE variant: covariate slot holds b(Y_{t_j})
    bool has_truth = false;
    Theta truth;

    std::size_t q() const { return covariates.empty() ? 0 : covariates.front().size(); }
};

/// Delta_j X for j >= 1; in the SDE variant this is the Euler surrogate
/// h * b(Y_{t_{j-1}}).
inline std::vector<double> covariate_increment(const PathSample& path, long j) {
    const std::size_t q = path.q();
    std::vector<double> dx(q);
    if (path.covariates_are_drift) {
        const double h = path.design.h();
        for (std::size_t k = 0; k < q; ++k) dx[k] = h * path.covariates[j - 1][k];
    } else {
        for (std::size_t k = 0; k < q; ++k)
            dx[k] = path.covariates[j][k] - path.covariates[j - 1][k];
    }
    return dx;
}

inline double response_increment(const PathSample& path, long j) {
    return path.responses[j] - path.responses[j - 1];
}

}  // namespace tlevy

#endif
