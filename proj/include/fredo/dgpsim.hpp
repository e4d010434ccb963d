#ifndef FREDO_DGPSIM_HPP
#define FREDO_DGPSIM_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace fredo {

/// AR(p) data-generating process x_t = c + sum_i theta_i x_{t-i} + e_t with
/// e_t ~ N(0, sigma2) i.i.d.
struct ARProcess {
    std::vector<double> theta;  // theta_1 .. theta_p
    double c = 0.0;
    double sigma2 = 1.0;

    std::size_t order() const { return theta.size(); }
    void validate() const;  // throws ConfigError
};

/// Simulate the recursion. The returned series holds the p initial values
/// followed by `steps` generated values (length p + steps). Deterministic
/// given the seed.
std::vector<double> simulate_ar(const ARProcess& proc, std::size_t steps,
                                std::span<const double> init, std::uint64_t seed);

/// Moving-average weights psi_0..psi_k of the shocks e_{p+k}, e_{p+k-1}, ...
/// in the expansion of x_{p+k}: psi_0 = 1,
/// psi_j = sum_{i=1..min(j,p)} theta_i * psi_{j-i}.
std::vector<double> psi_weights(const ARProcess& proc, std::size_t k);

/// Var[x_{p+j}] = sigma2 * sum_{i=0..j} psi_i^2 for j = 0..k: the lowest MSE
/// any forecaster can reach at each horizon when the process itself is known.
std::vector<double> analytic_forecast_variance(const ARProcess& proc, std::size_t k);

/// Noise-free recursion from an observed prefix: the conditional mean
/// E[x_{p+j} | prefix] for j = 0..k (the optimal forecast).
std::vector<double> conditional_mean_forecast(const ARProcess& proc,
                                              std::span<const double> prefix,
                                              std::size_t k);

/// Per-horizon sample variance of x_{p+j} across n_trials simulated futures
/// sharing one fixed observed prefix. Welford accumulation, deterministic
/// given the seed. Requires n_trials >= 2.
std::vector<double> monte_carlo_forecast_variance(const ARProcess& proc, std::size_t k,
                                                  std::size_t n_trials, std::uint64_t seed);

} // namespace fredo

#endif // FREDO_DGPSIM_HPP
