#include <doctest.h>

#include <cmath>
#include <random>

#include "fredo/dgpsim.hpp"
#include "fredo/errors.hpp"
#include "fredo/rng.hpp"
#include "oracles.hpp"

using namespace fredo;

namespace {

/// AR coefficients with prescribed characteristic roots: expand the monic
/// polynomial prod (z - root_m) and negate the non-leading coefficients.
std::vector<double> ar_coeffs_from_roots(const std::vector<double>& roots) {
    std::vector<double> c{1.0};
    for (const double root : roots) {
        c.push_back(0.0);
        for (std::size_t j = c.size() - 1; j >= 1; --j) {
            c[j] -= root * c[j - 1];
        }
    }
    std::vector<double> theta;
    for (std::size_t i = 1; i < c.size(); ++i) theta.push_back(-c[i]);
    return theta;
}

/// Stationary AR(p) whose variance increments remain representable over long
/// horizons: one dominant real root in [0.95, 0.99], the rest small.
ARProcess random_persistent_process(std::mt19937_64& rng) {
    const std::size_t p = 1 + rng() % 5;
    std::vector<double> roots;
    roots.push_back(0.95 + 0.04 * (static_cast<double>(rng() >> 11) * 0x1.0p-53));
    for (std::size_t i = 1; i < p; ++i) {
        roots.push_back((static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5));
    }
    ARProcess proc;
    proc.theta = ar_coeffs_from_roots(roots);
    proc.c = 0.0;
    proc.sigma2 = 0.5 + static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return proc;
}

} // namespace

TEST_SUITE("dgpsim") {

TEST_CASE("noise-free AR(1) follows the deterministic recursion") {
    ARProcess proc;
    proc.theta = {0.5};
    proc.c = 0.0;
    proc.sigma2 = 1e-24;  // sigma = 1e-12
    const auto x = simulate_ar(proc, 40, std::vector<double>{1.0}, 99);
    for (std::size_t t = 0; t < x.size(); ++t) {
        REQUIRE(std::abs(x[t] - std::pow(0.5, static_cast<double>(t))) < 1e-9);
    }
}

TEST_CASE("zero-lag process produces iid draws around c") {
    ARProcess proc;
    proc.theta = {0.0};
    proc.c = 4.2;
    proc.sigma2 = 1.0;
    const std::size_t steps = 40000;
    const auto x = simulate_ar(proc, steps, std::vector<double>{0.0}, 7);
    double mean = 0.0;
    for (std::size_t t = 1; t < x.size(); ++t) mean += x[t];
    mean /= static_cast<double>(steps);
    CHECK(std::abs(mean - proc.c) < 4.0 / std::sqrt(static_cast<double>(steps)));
}

TEST_CASE("simulation is deterministic per seed") {
    ARProcess proc;
    proc.theta = {0.3, -0.2};
    proc.c = 0.1;
    proc.sigma2 = 2.0;
    const std::vector<double> init{0.5, -0.5};
    const auto a = simulate_ar(proc, 100, init, 31337);
    const auto b = simulate_ar(proc, 100, init, 31337);
    const auto c = simulate_ar(proc, 100, init, 31338);
    CHECK(a == b);
    CHECK(a != c);
    CHECK(a.size() == 102);  // p initial values + 100 generated
}

TEST_CASE("psi weights on hand-solved recursions") {
    SUBCASE("AR(1) gives geometric weights") {
        ARProcess proc;
        proc.theta = {0.5};
        const auto psi = psi_weights(proc, 5);
        for (std::size_t j = 0; j <= 5; ++j) {
            REQUIRE(psi[j] == doctest::Approx(std::pow(0.5, static_cast<double>(j))).epsilon(1e-15));
        }
    }
    SUBCASE("AR(2) hand recursion") {
        ARProcess proc;
        proc.theta = {0.5, 0.25};
        const auto psi = psi_weights(proc, 3);
        CHECK(psi[0] == 1.0);
        CHECK(psi[1] == doctest::Approx(0.5));
        CHECK(psi[2] == doctest::Approx(0.5));      // 0.5*0.5 + 0.25*1
        CHECK(psi[3] == doctest::Approx(0.375));    // 0.5*0.5 + 0.25*0.5
    }
    SUBCASE("psi_0 is one for any process") {
        std::mt19937_64 rng(107);
        for (int rep = 0; rep < 10; ++rep) {
            const ARProcess proc = random_persistent_process(rng);
            CHECK(psi_weights(proc, 0)[0] == 1.0);
        }
    }
}

TEST_CASE("analytic forecast variance on pinned values") {
    ARProcess proc;
    proc.theta = {0.5};
    proc.sigma2 = 1.0;
    const auto var = analytic_forecast_variance(proc, 200);
    CHECK(var[0] == 1.0);            // first step: the fresh shock only
    CHECK(var[1] == 1.25);           // (theta^2 + 1) * sigma^2
    CHECK(std::abs(var[200] - 4.0 / 3.0) < 1e-6);  // geometric limit 1/(1-theta^2)
}

TEST_CASE("variance is strictly increasing for persistent processes") {
    std::mt19937_64 rng(109);
    for (int rep = 0; rep < 25; ++rep) {
        const ARProcess proc = random_persistent_process(rng);
        const auto var = analytic_forecast_variance(proc, 200);
        for (std::size_t j = 0; j + 1 < var.size(); ++j) {
            REQUIRE(var[j + 1] > var[j]);
        }
    }
}

TEST_CASE("stationary AR(1) variance stays below its limit") {
    for (const double theta : {0.2, 0.5, 0.9, -0.7}) {
        ARProcess proc;
        proc.theta = {theta};
        proc.sigma2 = 1.3;
        const double bound = proc.sigma2 / (1.0 - theta * theta);
        const auto var = analytic_forecast_variance(proc, 300);
        for (const double v : var) {
            REQUIRE(v <= bound * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("monte carlo variance agrees with the analytic curve") {
    ARProcess proc;
    proc.theta = {0.5};
    proc.sigma2 = 1.0;
    const std::size_t horizons = 20;
    const auto analytic = analytic_forecast_variance(proc, horizons);
    const auto empirical = monte_carlo_forecast_variance(proc, horizons, 20000, 2024);
    for (std::size_t j = 0; j <= horizons; ++j) {
        REQUIRE(std::abs(empirical[j] - analytic[j]) < 0.05 * analytic[j]);
    }
}

TEST_CASE("monte carlo variance is near zero for a noiseless process") {
    ARProcess proc;
    proc.theta = {0.8};
    proc.sigma2 = 1e-24;
    const auto var = monte_carlo_forecast_variance(proc, 10, 100, 5);
    for (const double v : var) {
        REQUIRE(v < 1e-18);
    }
}

TEST_CASE("true-mean forecaster attains the analytic variance as its MSE") {
    ARProcess proc;
    proc.theta = {0.6, 0.2};
    proc.sigma2 = 0.8;
    const std::size_t horizons = 12;
    const std::vector<double> prefix{0.3, -0.7};
    const auto forecast = conditional_mean_forecast(proc, prefix, horizons);
    const auto analytic = analytic_forecast_variance(proc, horizons);

    const std::size_t trials = 20000;
    std::vector<double> mse_acc(horizons + 1, 0.0);
    for (std::size_t trial = 0; trial < trials; ++trial) {
        const auto path = simulate_ar(proc, horizons + 1, prefix, derive_seed(888, trial));
        for (std::size_t j = 0; j <= horizons; ++j) {
            const double err = path[proc.order() + j] - forecast[j];
            mse_acc[j] += err * err;
        }
    }
    for (std::size_t j = 0; j <= horizons; ++j) {
        const double mse_j = mse_acc[j] / static_cast<double>(trials);
        REQUIRE(std::abs(mse_j - analytic[j]) < 0.05 * analytic[j]);
    }
}

TEST_CASE("validation rejects bad processes") {
    ARProcess empty;
    empty.sigma2 = 1.0;
    CHECK_THROWS_AS(empty.validate(), ConfigError);

    ARProcess bad_sigma;
    bad_sigma.theta = {0.5};
    bad_sigma.sigma2 = 0.0;
    CHECK_THROWS_AS(bad_sigma.validate(), ConfigError);

    ARProcess ok;
    ok.theta = {0.5};
    CHECK_THROWS_AS(simulate_ar(ok, 10, std::vector<double>{1.0, 2.0}, 0), LengthMismatch);
}

} // TEST_SUITE
