#include "fredo/model.hpp"

#include <chrono>
#include <cmath>
#include <numeric>
#include <random>

#include "fredo/errors.hpp"
#include "fredo/rng.hpp"
#include "fredo/spectral.hpp"

namespace fredo {

namespace {

Parity parity_of(std::size_t len) {
    return len % 2 == 0 ? Parity::even : Parity::odd;
}

/// Per-window quantities that do not change during training: the network
/// input (packed spectrum or raw history) and the baseline prediction in the
/// domain where the refinement is added.
struct PreparedWindow {
    std::vector<double> net_input;
    std::vector<double> base_repr;
    const std::vector<double>* target = nullptr;
};

PreparedWindow prepare(const ForecasterConfig& cfg, const ForecastWindow& w) {
    if (w.input.size() != cfg.input_len || w.target.size() != cfg.output_len) {
        throw ShapeMismatch("window shape does not match config");
    }
    PreparedWindow p;
    const std::vector<double> base = average_tile(w.input, cfg.tile(), cfg.output_len);
    if (cfg.domain == DomainMode::frequency) {
        p.net_input = dft_extract(w.input).packed;
        p.base_repr = dft_extract(base).packed;
    } else {
        p.net_input = w.input;
        p.base_repr = base;
    }
    p.target = &w.target;
    return p;
}

std::vector<double> forward_prepared(const ModelParams& params, const ForecasterConfig& cfg,
                                     const PreparedWindow& p, ForwardCache* cache) {
    std::vector<double> h = stack_forward(params, p.net_input, cache);
    for (std::size_t i = 0; i < h.size(); ++i) {
        h[i] += p.base_repr[i];
    }
    if (cfg.domain == DomainMode::frequency) {
        return insert_idft({std::move(h), parity_of(cfg.output_len)});
    }
    return h;
}

/// Fisher-Yates with an explicit generator so shuffles are reproducible
/// across standard libraries.
void shuffle_indices(std::vector<std::size_t>& idx, std::mt19937_64& rng) {
    for (std::size_t i = idx.size(); i > 1; --i) {
        const std::size_t j = rng() % i;
        std::swap(idx[i - 1], idx[j]);
    }
}

double mean_val_mse(const ModelParams& params, const ForecasterConfig& cfg,
                    const std::vector<PreparedWindow>& windows) {
    double total = 0.0;
    for (const auto& w : windows) {
        total += mse(forward_prepared(params, cfg, w, nullptr), *w.target);
    }
    return total / static_cast<double>(windows.size());
}

} // namespace

std::string to_string(DomainMode mode) {
    return mode == DomainMode::frequency ? "frequency" : "time";
}

DomainMode domain_mode_from_string(const std::string& s) {
    if (s == "frequency") return DomainMode::frequency;
    if (s == "time") return DomainMode::time;
    throw ConfigError("unknown domain mode: " + s + " (expected frequency|time)");
}

void ForecasterConfig::validate() const {
    if (output_len < 1) throw ConfigError("output_len must be >= 1");
    if (depth < 1) throw ConfigError("depth must be >= 1");
    if (period < 1 || cycles < 1) throw ConfigError("period and cycles must be >= 1");
    if (input_len != period * cycles) {
        throw ConfigError("input_len must equal cycles * period (" +
                          std::to_string(cycles) + " * " + std::to_string(period) +
                          " != " + std::to_string(input_len) + ")");
    }
    if (domain == DomainMode::frequency && (input_len < 2 || output_len < 2)) {
        throw ConfigError("frequency mode needs input_len >= 2 and output_len >= 2");
    }
    if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
    if (max_epochs < 1) throw ConfigError("max_epochs must be >= 1");
    if (!(lr >= 0.0) || !std::isfinite(lr)) throw ConfigError("lr must be finite and >= 0");
}

std::vector<double> forecast(const ModelParams& params, const ForecasterConfig& cfg,
                             std::span<const double> input) {
    if (input.size() != cfg.input_len) {
        throw LengthMismatch("input length " + std::to_string(input.size()) +
                             " != configured input_len " + std::to_string(cfg.input_len));
    }
    ForecastWindow w;
    w.input.assign(input.begin(), input.end());
    w.target.assign(cfg.output_len, 0.0);
    return forward_prepared(params, cfg, prepare(cfg, w), nullptr);
}

std::size_t param_count(const ForecasterConfig& cfg) {
    cfg.validate();
    const std::size_t in = cfg.input_len;
    const std::size_t out = cfg.output_len;
    return (in * out + out) + cfg.depth * 2 * (out * out + out);
}

TrainResult train(const ForecasterConfig& cfg,
                  std::span<const ForecastWindow> train_windows,
                  std::span<const ForecastWindow> val_windows) {
    cfg.validate();
    if (train_windows.empty()) throw EmptyTrainingSet("no training windows");
    if (val_windows.empty()) throw EmptyTrainingSet("no validation windows");

    const auto t_start = std::chrono::steady_clock::now();

    std::vector<PreparedWindow> prep_train;
    prep_train.reserve(train_windows.size());
    for (const auto& w : train_windows) prep_train.push_back(prepare(cfg, w));
    std::vector<PreparedWindow> prep_val;
    prep_val.reserve(val_windows.size());
    for (const auto& w : val_windows) prep_val.push_back(prepare(cfg, w));

    ModelParams params = init_params(cfg.input_len, cfg.output_len, cfg.depth, cfg.seed);
    AdamState adam = make_adam_state(params, cfg.lr);
    std::mt19937_64 shuffle_rng(derive_seed(cfg.seed, 1));

    TrainResult result;
    result.params = params;
    TrainReport& report = result.report;

    // The untrained stack outputs zero, so this equals the baseline's
    // validation MSE and best-so-far can never end up above it.
    double best_val = mean_val_mse(params, cfg, prep_val);
    report.val_loss.push_back(best_val);
    report.best_epoch = 0;

    const double inv_out = 1.0 / static_cast<double>(cfg.output_len);
    std::vector<std::size_t> order(prep_train.size());
    std::iota(order.begin(), order.end(), 0);

    std::size_t epochs_since_best = 0;
    for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        shuffle_indices(order, shuffle_rng);

        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
            const std::size_t end = std::min(order.size(), start + cfg.batch_size);
            const double inv_batch = 1.0 / static_cast<double>(end - start);

            ModelParams batch_grad = make_params(cfg.input_len, cfg.output_len, cfg.depth);
            double batch_loss = 0.0;
            for (std::size_t s = start; s < end; ++s) {
                const PreparedWindow& w = prep_train[order[s]];
                ForwardCache cache;
                const std::vector<double> out = forward_prepared(params, cfg, w, &cache);
                batch_loss += mse(out, *w.target);

                std::vector<double> grad_out(cfg.output_len);
                for (std::size_t i = 0; i < cfg.output_len; ++i) {
                    grad_out[i] = 2.0 * (out[i] - (*w.target)[i]) * inv_out;
                }
                const std::vector<double> upstream =
                    cfg.domain == DomainMode::frequency ? insert_idft_adjoint(grad_out)
                                                        : std::move(grad_out);
                const Gradients g = backward(params, cache, upstream);
                axpy_params(batch_grad, g.wrt_params, inv_batch);
            }
            batch_loss *= inv_batch;
            if (!std::isfinite(batch_loss)) {
                throw NonFiniteLoss("non-finite loss at epoch " + std::to_string(epoch) +
                                    ", batch starting at sample " + std::to_string(start));
            }
            epoch_loss += batch_loss * static_cast<double>(end - start);
            adam_step(params, batch_grad, adam);
        }
        report.train_loss.push_back(epoch_loss / static_cast<double>(order.size()));

        const double val = mean_val_mse(params, cfg, prep_val);
        report.val_loss.push_back(val);
        report.epochs_run = epoch;
        if (val < best_val) {
            best_val = val;
            result.params = params;
            report.best_epoch = epoch;
            epochs_since_best = 0;
        } else {
            ++epochs_since_best;
            if (epochs_since_best >= cfg.patience) break;
        }
    }

    report.wall_seconds = std::chrono::duration<double>(
        std::chrono::steady_clock::now() - t_start).count();
    return result;
}

PredictionSet predict_dataset(const ModelParams& params, const ForecasterConfig& cfg,
                              const TimeSeriesMatrix& m, std::size_t stride) {
    cfg.validate();
    PredictionSet out;
    out.windows = make_windows(m, cfg.input_len, cfg.output_len, stride);
    out.predictions.reserve(out.windows.size());
    for (const auto& w : out.windows) {
        out.predictions.push_back(forward_prepared(params, cfg, prepare(cfg, w), nullptr));
    }
    return out;
}

double evaluate_mse(const ModelParams& params, const ForecasterConfig& cfg,
                    std::span<const ForecastWindow> windows) {
    if (windows.empty()) throw EmptyInput("no windows to evaluate");
    double total = 0.0;
    for (const auto& w : windows) {
        const PreparedWindow p = prepare(cfg, w);
        total += mse(forward_prepared(params, cfg, p, nullptr), *p.target);
    }
    return total / static_cast<double>(windows.size());
}

} // namespace fredo
