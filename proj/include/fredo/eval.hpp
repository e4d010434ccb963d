#ifndef FREDO_EVAL_HPP
#define FREDO_EVAL_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fredo/dataio.hpp"
#include "fredo/model.hpp"

namespace fredo {

/// Per-horizon test error, averaged over all windows and series jointly.
struct ErrorCurve {
    std::vector<double> horizon_mse;
    std::vector<double> horizon_mae;
    double aggregate_mse = 0.0;  // mean over horizons
    double aggregate_mae = 0.0;
};

ErrorCurve error_curve(const std::vector<std::vector<double>>& preds,
                       const std::vector<std::vector<double>>& targets);

/// Convenience overload evaluating against window targets.
ErrorCurve error_curve(const std::vector<std::vector<double>>& preds,
                       const std::vector<ForecastWindow>& windows);

struct PairedTestResult {
    std::size_t n = 0;
    double mean_diff = 0.0;
    double t_stat = 0.0;
    double p_value = 1.0;
    bool significant_at_5pct = false;
};

/// Regularized incomplete beta function I_x(a, b), continued-fraction
/// evaluation. Exposed because the t-test p-values rest on it.
double regularized_incomplete_beta(double a, double b, double x);

/// CDF of Student's t with `dof` degrees of freedom.
double student_t_cdf(double t, double dof);

/// Two-sided paired t-test on element-wise differences a[i] - b[i], with
/// sample (n-1) standard deviation. Throws TooFewPairs (n < 2) and
/// ZeroVarianceDifferences when every difference is identical.
PairedTestResult paired_t_test(std::span<const double> errors_a,
                               std::span<const double> errors_b);

/// Result of training one model per series in two domain modes and comparing
/// their per-series test errors.
struct DomainComparison {
    std::vector<double> mse_a;          // arm A per-series test MSE
    std::vector<double> mse_b;          // arm B
    std::vector<double> mae_a;
    std::vector<double> mae_b;
    std::vector<double> baseline_mse;   // averaged-cycle baseline, same windows
    double mean_mse_a = 0.0;
    double mean_mse_b = 0.0;
    double mean_baseline_mse = 0.0;
    PairedTestResult mse_test;          // paired test on (mse_a, mse_b)
};

/// Train arm A and arm B once per series (same seed and shapes within a
/// pair), evaluate per-series test MSE/MAE, and run the paired t-test on the
/// MSE pairs. Splits and normalization follow the standard per-series
/// pipeline. Training runs in parallel across series; results are gathered
/// in series order, so output is deterministic given `seed`.
DomainComparison univariate_compare(const TimeSeriesMatrix& dataset,
                                    const ForecasterConfig& cfg_template,
                                    const SplitSpec& split,
                                    std::uint64_t seed,
                                    DomainMode arm_a = DomainMode::frequency,
                                    DomainMode arm_b = DomainMode::time);

} // namespace fredo

#endif // FREDO_EVAL_HPP
