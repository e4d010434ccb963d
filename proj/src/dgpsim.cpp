#include "fredo/dgpsim.hpp"

#include <cmath>
#include <string>

#include "fredo/errors.hpp"
#include "fredo/rng.hpp"

namespace fredo {

void ARProcess::validate() const {
    if (theta.empty()) {
        throw ConfigError("AR process needs at least one lag coefficient");
    }
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
        throw ConfigError("sigma2 must be positive and finite");
    }
    for (double t : theta) {
        if (!std::isfinite(t)) throw ConfigError("non-finite AR coefficient");
    }
}

std::vector<double> simulate_ar(const ARProcess& proc, std::size_t steps,
                                std::span<const double> init, std::uint64_t seed) {
    proc.validate();
    const std::size_t p = proc.order();
    if (init.size() != p) {
        throw LengthMismatch("init length " + std::to_string(init.size()) +
                             " != AR order " + std::to_string(p));
    }
    std::vector<double> x(init.begin(), init.end());
    x.reserve(p + steps);
    NormalSampler noise(seed);
    const double sigma = std::sqrt(proc.sigma2);
    for (std::size_t t = 0; t < steps; ++t) {
        double v = proc.c + sigma * noise.next();
        const std::size_t idx = x.size();
        for (std::size_t i = 1; i <= p; ++i) {
            v += proc.theta[i - 1] * x[idx - i];
        }
        x.push_back(v);
    }
    return x;
}

std::vector<double> psi_weights(const ARProcess& proc, std::size_t k) {
    proc.validate();
    const std::size_t p = proc.order();
    std::vector<double> psi(k + 1, 0.0);
    psi[0] = 1.0;
    for (std::size_t j = 1; j <= k; ++j) {
        double acc = 0.0;
        const std::size_t m = std::min(j, p);
        for (std::size_t i = 1; i <= m; ++i) {
            acc += proc.theta[i - 1] * psi[j - i];
        }
        psi[j] = acc;
    }
    return psi;
}

std::vector<double> analytic_forecast_variance(const ARProcess& proc, std::size_t k) {
    const std::vector<double> psi = psi_weights(proc, k);
    std::vector<double> var(k + 1);
    double acc = 0.0;
    for (std::size_t j = 0; j <= k; ++j) {
        acc += psi[j] * psi[j];
        var[j] = proc.sigma2 * acc;
    }
    return var;
}

std::vector<double> conditional_mean_forecast(const ARProcess& proc,
                                              std::span<const double> prefix,
                                              std::size_t k) {
    proc.validate();
    const std::size_t p = proc.order();
    if (prefix.size() != p) {
        throw LengthMismatch("prefix length != AR order");
    }
    std::vector<double> x(prefix.begin(), prefix.end());
    for (std::size_t j = 0; j <= k; ++j) {
        double v = proc.c;
        const std::size_t idx = x.size();
        for (std::size_t i = 1; i <= p; ++i) {
            v += proc.theta[i - 1] * x[idx - i];
        }
        x.push_back(v);
    }
    return {x.begin() + static_cast<std::ptrdiff_t>(p), x.end()};
}

std::vector<double> monte_carlo_forecast_variance(const ARProcess& proc, std::size_t k,
                                                  std::size_t n_trials, std::uint64_t seed) {
    proc.validate();
    if (n_trials < 2) {
        throw ConfigError("need at least 2 trials for a sample variance");
    }
    const std::size_t p = proc.order();
    // All trials share one deterministic observed prefix; its value only
    // shifts the mean path, not the variance.
    std::vector<double> prefix(p, 1.0);

    std::vector<double> mean(k + 1, 0.0);
    std::vector<double> m2(k + 1, 0.0);
    for (std::size_t trial = 0; trial < n_trials; ++trial) {
        const std::vector<double> path =
            simulate_ar(proc, k + 1, prefix, derive_seed(seed, trial));
        for (std::size_t j = 0; j <= k; ++j) {
            const double v = path[p + j];
            const double delta = v - mean[j];
            mean[j] += delta / static_cast<double>(trial + 1);
            m2[j] += delta * (v - mean[j]);
        }
    }
    std::vector<double> var(k + 1);
    for (std::size_t j = 0; j <= k; ++j) {
        var[j] = m2[j] / static_cast<double>(n_trials - 1);
    }
    return var;
}

} // namespace fredo
