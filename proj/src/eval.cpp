#include "fredo/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <string>
#include <thread>

#include "fredo/errors.hpp"
#include "fredo/rng.hpp"

namespace fredo {

namespace {

ErrorCurve curve_impl(const std::vector<std::vector<double>>& preds,
                      const std::vector<const std::vector<double>*>& targets) {
    if (preds.empty()) throw EmptyInput("error_curve needs at least one window");
    if (preds.size() != targets.size()) {
        throw ShapeMismatch("prediction and target counts differ");
    }
    const std::size_t horizon = preds[0].size();
    ErrorCurve curve;
    curve.horizon_mse.assign(horizon, 0.0);
    curve.horizon_mae.assign(horizon, 0.0);
    for (std::size_t w = 0; w < preds.size(); ++w) {
        if (preds[w].size() != horizon || targets[w]->size() != horizon) {
            throw ShapeMismatch("window " + std::to_string(w) + " has a different horizon");
        }
        for (std::size_t o = 0; o < horizon; ++o) {
            const double d = preds[w][o] - (*targets[w])[o];
            curve.horizon_mse[o] += d * d;
            curve.horizon_mae[o] += std::abs(d);
        }
    }
    const double inv_n = 1.0 / static_cast<double>(preds.size());
    for (std::size_t o = 0; o < horizon; ++o) {
        curve.horizon_mse[o] *= inv_n;
        curve.horizon_mae[o] *= inv_n;
        curve.aggregate_mse += curve.horizon_mse[o];
        curve.aggregate_mae += curve.horizon_mae[o];
    }
    curve.aggregate_mse /= static_cast<double>(horizon);
    curve.aggregate_mae /= static_cast<double>(horizon);
    return curve;
}

/// Continued fraction for the incomplete beta function (modified Lentz).
double betacf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 3e-16;
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) break;
    }
    return h;
}

struct SeriesOutcome {
    double mse_a = 0.0, mse_b = 0.0;
    double mae_a = 0.0, mae_b = 0.0;
    double baseline_mse = 0.0;
};

SeriesOutcome compare_one_series(const TimeSeriesMatrix& dataset, std::size_t series,
                                 const ForecasterConfig& cfg_template,
                                 const SplitSpec& split, std::uint64_t seed,
                                 DomainMode arm_a, DomainMode arm_b) {
    TimeSeriesMatrix uni;
    uni.t_len = dataset.t_len;
    uni.n_series = 1;
    uni.series_names = {dataset.series_names[series]};
    const auto col = dataset.series(series);
    uni.values.assign(col.begin(), col.end());

    const SplitResult parts = chronological_split(uni, split);
    const Normalizer norm = fit_normalizer(parts.train);
    const TimeSeriesMatrix train_n = apply_normalizer(parts.train, norm);
    const TimeSeriesMatrix val_n = apply_normalizer(parts.val, norm);
    const TimeSeriesMatrix test_n = apply_normalizer(parts.test, norm);

    ForecasterConfig cfg = cfg_template;
    cfg.seed = derive_seed(seed, series);

    const auto train_w = make_windows(train_n, cfg.input_len, cfg.output_len);
    const auto val_w = make_windows(val_n, cfg.input_len, cfg.output_len);
    const auto test_w = make_windows(test_n, cfg.input_len, cfg.output_len);

    SeriesOutcome out;
    for (int arm = 0; arm < 2; ++arm) {
        cfg.domain = arm == 0 ? arm_a : arm_b;
        const TrainResult trained = train(cfg, train_w, val_w);
        const auto preds = predict_dataset(trained.params, cfg, test_n);
        const ErrorCurve curve = error_curve(preds.predictions, preds.windows);
        (arm == 0 ? out.mse_a : out.mse_b) = curve.aggregate_mse;
        (arm == 0 ? out.mae_a : out.mae_b) = curve.aggregate_mae;
    }

    double base_total = 0.0;
    for (const auto& w : test_w) {
        base_total += mse(average_tile(w.input, cfg.tile(), cfg.output_len), w.target);
    }
    out.baseline_mse = base_total / static_cast<double>(test_w.size());
    return out;
}

} // namespace

ErrorCurve error_curve(const std::vector<std::vector<double>>& preds,
                       const std::vector<std::vector<double>>& targets) {
    std::vector<const std::vector<double>*> ptrs;
    ptrs.reserve(targets.size());
    for (const auto& t : targets) ptrs.push_back(&t);
    return curve_impl(preds, ptrs);
}

ErrorCurve error_curve(const std::vector<std::vector<double>>& preds,
                       const std::vector<ForecastWindow>& windows) {
    std::vector<const std::vector<double>*> ptrs;
    ptrs.reserve(windows.size());
    for (const auto& w : windows) ptrs.push_back(&w.target);
    return curve_impl(preds, ptrs);
}

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw ConfigError("incomplete beta needs a > 0 and b > 0");
    }
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * betacf(a, b, x) / a;
    }
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, double dof) {
    if (!(dof > 0.0)) {
        throw ConfigError("degrees of freedom must be positive");
    }
    if (t == 0.0) return 0.5;
    const double x = dof / (dof + t * t);
    const double tail = 0.5 * regularized_incomplete_beta(dof / 2.0, 0.5, x);
    return t > 0.0 ? 1.0 - tail : tail;
}

PairedTestResult paired_t_test(std::span<const double> errors_a,
                               std::span<const double> errors_b) {
    if (errors_a.size() != errors_b.size()) {
        throw ShapeMismatch("paired test needs equal-length samples");
    }
    const std::size_t n = errors_a.size();
    if (n < 2) {
        throw TooFewPairs("paired t-test needs at least 2 pairs");
    }

    double mean_d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mean_d += errors_a[i] - errors_b[i];
    }
    mean_d /= static_cast<double>(n);

    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = errors_a[i] - errors_b[i] - mean_d;
        ss += d * d;
    }
    if (ss == 0.0) {
        throw ZeroVarianceDifferences("all paired differences are identical");
    }
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));

    PairedTestResult r;
    r.n = n;
    r.mean_diff = mean_d;
    r.t_stat = mean_d / (sd / std::sqrt(static_cast<double>(n)));
    const double dof = static_cast<double>(n - 1);
    r.p_value = regularized_incomplete_beta(dof / 2.0, 0.5,
                                            dof / (dof + r.t_stat * r.t_stat));
    r.significant_at_5pct = r.p_value < 0.05;
    return r;
}

DomainComparison univariate_compare(const TimeSeriesMatrix& dataset,
                                    const ForecasterConfig& cfg_template,
                                    const SplitSpec& split,
                                    std::uint64_t seed,
                                    DomainMode arm_a, DomainMode arm_b) {
    if (dataset.n_series < 2) {
        throw TooFewPairs("univariate comparison needs at least 2 series");
    }

    const std::size_t n = dataset.n_series;
    std::vector<SeriesOutcome> outcomes(n);
    const std::size_t workers =
        std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));

    std::atomic<std::size_t> next{0};
    std::vector<std::future<void>> futures;
    futures.reserve(workers);
    for (std::size_t wkr = 0; wkr < workers; ++wkr) {
        futures.push_back(std::async(std::launch::async, [&] {
            for (std::size_t s = next.fetch_add(1); s < n; s = next.fetch_add(1)) {
                try {
                    outcomes[s] = compare_one_series(dataset, s, cfg_template, split,
                                                     seed, arm_a, arm_b);
                } catch (const Error& e) {
                    throw Error("series " + std::to_string(s) + ": " + e.what());
                }
            }
        }));
    }
    for (auto& f : futures) f.get();  // rethrows the first failure

    DomainComparison cmp;
    for (std::size_t s = 0; s < n; ++s) {
        cmp.mse_a.push_back(outcomes[s].mse_a);
        cmp.mse_b.push_back(outcomes[s].mse_b);
        cmp.mae_a.push_back(outcomes[s].mae_a);
        cmp.mae_b.push_back(outcomes[s].mae_b);
        cmp.baseline_mse.push_back(outcomes[s].baseline_mse);
        cmp.mean_mse_a += outcomes[s].mse_a;
        cmp.mean_mse_b += outcomes[s].mse_b;
        cmp.mean_baseline_mse += outcomes[s].baseline_mse;
    }
    cmp.mean_mse_a /= static_cast<double>(n);
    cmp.mean_mse_b /= static_cast<double>(n);
    cmp.mean_baseline_mse /= static_cast<double>(n);
    cmp.mse_test = paired_t_test(cmp.mse_a, cmp.mse_b);
    return cmp;
}

} // namespace fredo
