#include <doctest.h>

#include <cmath>
#include <random>

#include "fredo/baseline.hpp"
#include "fredo/errors.hpp"
#include "fredo/eval.hpp"
#include "fredo/rng.hpp"
#include "fredo/synthetic.hpp"
#include "oracles.hpp"

using namespace fredo;

TEST_SUITE("eval") {

TEST_CASE("error curve on hand-checked windows") {
    SUBCASE("perfect predictions") {
        const std::vector<std::vector<double>> preds{{1, 2}, {3, 4}};
        const ErrorCurve c = error_curve(preds, preds);
        CHECK(c.horizon_mse == std::vector<double>{0, 0});
        CHECK(c.horizon_mae == std::vector<double>{0, 0});
        CHECK(c.aggregate_mse == 0.0);
    }
    SUBCASE("single window") {
        const std::vector<std::vector<double>> pred{{0, 0}};
        const std::vector<std::vector<double>> target{{1, 3}};
        const ErrorCurve c = error_curve(pred, target);
        CHECK(c.horizon_mse == std::vector<double>{1, 9});
        CHECK(c.aggregate_mse == doctest::Approx(5.0));
        CHECK(c.horizon_mae == std::vector<double>{1, 3});
        CHECK(c.aggregate_mae == doctest::Approx(2.0));
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(error_curve(std::vector<std::vector<double>>{},
                                    std::vector<std::vector<double>>{}),
                        EmptyInput);
        const std::vector<std::vector<double>> one{{1, 2}};
        const std::vector<std::vector<double>> two{{1, 2}, {3, 4}};
        CHECK_THROWS_AS(error_curve(one, two), ShapeMismatch);
    }
}

TEST_CASE("aggregate equals the mean of the horizon curve") {
    std::mt19937_64 rng(113);
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t horizon = 1 + rng() % 10;
        const std::size_t count = 1 + rng() % 20;
        std::vector<std::vector<double>> preds, targets;
        for (std::size_t w = 0; w < count; ++w) {
            preds.push_back(oracles::random_vector(horizon, rng));
            targets.push_back(oracles::random_vector(horizon, rng));
        }
        const ErrorCurve c = error_curve(preds, targets);
        double mean_mse = 0.0, mean_mae = 0.0;
        for (std::size_t o = 0; o < horizon; ++o) {
            mean_mse += c.horizon_mse[o];
            mean_mae += c.horizon_mae[o];
        }
        mean_mse /= static_cast<double>(horizon);
        mean_mae /= static_cast<double>(horizon);
        REQUIRE(std::abs(c.aggregate_mse - mean_mse) < 1e-12);
        REQUIRE(std::abs(c.aggregate_mae - mean_mae) < 1e-12);
    }
}

TEST_CASE("baseline error curve trends upward on noisy periodic data") {
    // error accumulation: per-horizon MSE should correlate positively with
    // the horizon, measured over many seeds
    const std::size_t period = 8;
    const std::size_t in_len = 3 * period;
    const std::size_t out_len = 4 * period;
    std::vector<double> horizon_acc(out_len, 0.0);
    for (int rep = 0; rep < 40; ++rep) {
        NormalSampler noise(derive_seed(127, static_cast<std::uint64_t>(rep)));
        // random walk on top of a seasonal cycle: later horizons drift more
        TimeSeriesMatrix m;
        m.t_len = 400;
        m.n_series = 1;
        m.series_names = {"s0"};
        double drift = 0.0;
        for (std::size_t t = 0; t < m.t_len; ++t) {
            drift += 0.05 * noise.next();
            m.values.push_back(std::sin(2.0 * M_PI * t / static_cast<double>(period)) + drift);
        }
        const auto windows = make_windows(m, in_len, out_len, 7);
        std::vector<std::vector<double>> preds;
        std::vector<std::vector<double>> targets;
        for (const auto& w : windows) {
            preds.push_back(average_tile(w.input, {period, 3}, out_len));
            targets.push_back(w.target);
        }
        const ErrorCurve c = error_curve(preds, targets);
        for (std::size_t o = 0; o < out_len; ++o) horizon_acc[o] += c.horizon_mse[o];
    }
    std::vector<double> horizons(out_len);
    for (std::size_t o = 0; o < out_len; ++o) horizons[o] = static_cast<double>(o);
    CHECK(oracles::spearman_rho(horizons, horizon_acc) > 0.5);
}

TEST_CASE("incomplete beta against tabulated values") {
    // I_x(a,b) reference values from the standard identities
    CHECK(regularized_incomplete_beta(1.0, 1.0, 0.3) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(regularized_incomplete_beta(2.0, 1.0, 0.5) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(regularized_incomplete_beta(1.0, 2.0, 0.5) == doctest::Approx(0.75).epsilon(1e-12));
    // symmetry I_x(a,b) = 1 - I_{1-x}(b,a)
    std::mt19937_64 rng(131);
    for (int rep = 0; rep < 50; ++rep) {
        const double a = 0.5 + 5.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
        const double b = 0.5 + 5.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
        const double x = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        const double lhs = regularized_incomplete_beta(a, b, x);
        const double rhs = 1.0 - regularized_incomplete_beta(b, a, 1.0 - x);
        REQUIRE(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
}

TEST_CASE("student t cdf matches the quadrature oracle") {
    for (const double dof : {1.0, 2.0, 3.0, 5.0, 10.0, 30.0, 100.0, 250.0, 500.0}) {
        for (const double t : {0.0, 0.31, 1.0, 1.96, 2.5, 4.0}) {
            const double p_lib =
                2.0 * (1.0 - student_t_cdf(std::abs(t), dof));
            const double p_oracle = oracles::t_test_p_value_quadrature(t, dof);
            REQUIRE(std::abs(p_lib - p_oracle) < 1e-8);
        }
    }
    // known exact point: t distribution is symmetric
    CHECK(student_t_cdf(0.0, 7.0) == 0.5);
    // dof=1 is Cauchy: CDF(1) = 3/4
    CHECK(student_t_cdf(1.0, 1.0) == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("paired t test on hand-built samples") {
    SUBCASE("identical samples have zero variance") {
        const std::vector<double> a{1, 2, 3};
        CHECK_THROWS_AS(paired_t_test(a, a), ZeroVarianceDifferences);
    }
    SUBCASE("too few pairs") {
        CHECK_THROWS_AS(paired_t_test(std::vector<double>{1}, std::vector<double>{2}),
                        TooFewPairs);
    }
    SUBCASE("a consistently larger arm is highly significant") {
        std::vector<double> a(30), b(30, 0.0);
        for (std::size_t i = 0; i < 30; ++i) {
            a[i] = 1.0 + 1e-3 * static_cast<double>(i % 7);  // tiny jitter, all positive
        }
        const PairedTestResult r = paired_t_test(a, b);
        CHECK(r.n == 30);
        CHECK(r.mean_diff > 0.99);
        CHECK(r.p_value < 1e-3);
        CHECK(r.significant_at_5pct);
    }
}

TEST_CASE("paired t test is antisymmetric") {
    std::mt19937_64 rng(137);
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t n = 5 + rng() % 40;
        const auto a = oracles::random_vector(n, rng);
        const auto b = oracles::random_vector(n, rng);
        const PairedTestResult ab = paired_t_test(a, b);
        const PairedTestResult ba = paired_t_test(b, a);
        REQUIRE(ab.t_stat == doctest::Approx(-ba.t_stat).epsilon(1e-12));
        REQUIRE(ab.p_value == doctest::Approx(ba.p_value).epsilon(1e-12));
    }
}

TEST_CASE("null rejection rate sits near the nominal 5 percent") {
    std::mt19937_64 seed_src(139);
    const int sims = 2000;
    int rejections = 0;
    for (int sim = 0; sim < sims; ++sim) {
        NormalSampler gauss(seed_src());
        std::vector<double> a(30), b(30);
        for (std::size_t i = 0; i < 30; ++i) {
            a[i] = gauss.next();
            b[i] = gauss.next();
        }
        if (paired_t_test(a, b).significant_at_5pct) ++rejections;
    }
    const double rate = static_cast<double>(rejections) / sims;
    CHECK(rate > 0.035);  // ~2 sigma band around 0.05 for 2000 sims
    CHECK(rate < 0.065);
}

TEST_CASE("self-comparison of identical arms reports zero variance") {
    SyntheticSpec spec;
    spec.n_series = 3;
    spec.t_len = 420;
    spec.period = 8;
    spec.seed = 5;
    const TimeSeriesMatrix data = gen_synthetic(spec);

    ForecasterConfig cfg;
    cfg.input_len = 8;
    cfg.output_len = 8;
    cfg.period = 8;
    cfg.cycles = 1;
    cfg.depth = 1;
    cfg.lr = 1e-3;
    cfg.max_epochs = 1;
    cfg.batch_size = 64;

    CHECK_THROWS_AS(univariate_compare(data, cfg, {0.7, 0.1, 0.2}, 11,
                                       DomainMode::time, DomainMode::time),
                    ZeroVarianceDifferences);
}

TEST_CASE("univariate comparison smoke run produces aligned outputs") {
    SyntheticSpec spec;
    spec.n_series = 4;
    spec.t_len = 420;
    spec.period = 8;
    spec.seed = 6;
    const TimeSeriesMatrix data = gen_synthetic(spec);

    ForecasterConfig cfg;
    cfg.input_len = 8;
    cfg.output_len = 8;
    cfg.period = 8;
    cfg.cycles = 1;
    cfg.depth = 1;
    cfg.lr = 1e-3;
    cfg.max_epochs = 2;
    cfg.batch_size = 32;

    const DomainComparison cmp = univariate_compare(data, cfg, {0.7, 0.1, 0.2}, 11);
    CHECK(cmp.mse_a.size() == 4);
    CHECK(cmp.mse_b.size() == 4);
    CHECK(cmp.baseline_mse.size() == 4);
    CHECK(cmp.mse_test.n == 4);
    CHECK(cmp.mse_test.p_value >= 0.0);
    CHECK(cmp.mse_test.p_value <= 1.0);
    for (double v : cmp.mse_a) CHECK(v >= 0.0);

    // per-pair model sizes are equal by construction
    ForecasterConfig fa = cfg;
    fa.domain = DomainMode::frequency;
    ForecasterConfig fb = cfg;
    fb.domain = DomainMode::time;
    CHECK(param_count(fa) == param_count(fb));
}

} // TEST_SUITE
