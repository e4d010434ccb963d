#ifndef FREDO_MODEL_HPP
#define FREDO_MODEL_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fredo/baseline.hpp"
#include "fredo/dataio.hpp"
#include "fredo/nn.hpp"

namespace fredo {

/// Where the refinement network operates. `frequency` is the FreDo pipeline
/// (inputs and the baseline prediction pass through the packed spectral
/// transform); `time` is the TimeDo control with both transforms removed.
enum class DomainMode { frequency, time };

std::string to_string(DomainMode mode);
DomainMode domain_mode_from_string(const std::string& s);

struct ForecasterConfig {
    std::size_t input_len = 0;
    std::size_t output_len = 0;
    std::size_t period = 1;
    std::size_t cycles = 1;   // input_len == cycles * period
    std::size_t depth = 2;
    DomainMode domain = DomainMode::frequency;

    double lr = 1e-4;
    std::size_t batch_size = 32;
    std::size_t patience = 3;
    std::size_t max_epochs = 10;
    std::uint64_t seed = 0;

    void validate() const;  // throws ConfigError
    AverageTileConfig tile() const { return {period, cycles}; }
};

struct TrainReport {
    std::size_t epochs_run = 0;
    std::vector<double> train_loss;  // one entry per epoch
    std::vector<double> val_loss;    // entry 0 is the untrained model
    std::size_t best_epoch = 0;      // 0 = untrained (baseline) weights
    double wall_seconds = 0.0;
};

/// One forward pass. The averaged-cycle baseline is always computed from the
/// input; the Mixer stack refines it, in the packed spectral domain for
/// DomainMode::frequency and directly for DomainMode::time.
std::vector<double> forecast(const ModelParams& params, const ForecasterConfig& cfg,
                             std::span<const double> input);

/// Trainable scalar count: (I*O + O) + depth * 2 * (O^2 + O). Identical for
/// both domain modes by construction.
std::size_t param_count(const ForecasterConfig& cfg);

struct TrainResult {
    ModelParams params;  // best-validation weights
    TrainReport report;
};

/// Mini-batch Adam on time-domain MSE over windows pooled from all series,
/// with a seeded shuffle each epoch and early stopping on validation MSE.
/// The returned weights are the ones with the lowest validation MSE seen,
/// which the untrained (baseline-equivalent) model participates in.
/// Deterministic given cfg.seed.
TrainResult train(const ForecasterConfig& cfg,
                  std::span<const ForecastWindow> train_windows,
                  std::span<const ForecastWindow> val_windows);

struct PredictionSet {
    std::vector<ForecastWindow> windows;
    std::vector<std::vector<double>> predictions;  // aligned with windows
};

/// Forward pass over every window of the matrix (stride 1 by default).
PredictionSet predict_dataset(const ModelParams& params, const ForecasterConfig& cfg,
                              const TimeSeriesMatrix& m, std::size_t stride = 1);

/// Mean MSE of the model over a set of windows.
double evaluate_mse(const ModelParams& params, const ForecasterConfig& cfg,
                    std::span<const ForecastWindow> windows);

} // namespace fredo

#endif // FREDO_MODEL_HPP
