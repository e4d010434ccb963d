#include <doctest.h>

#include <cmath>
#include <random>

#include "fredo/checkpoint.hpp"
#include "fredo/errors.hpp"
#include "fredo/model.hpp"
#include "fredo/rng.hpp"
#include "fredo/spectral.hpp"
#include "fredo/synthetic.hpp"
#include "oracles.hpp"

using namespace fredo;

namespace {

ForecasterConfig small_config(DomainMode mode, std::size_t period = 6, std::size_t cycles = 2,
                              std::size_t out_len = 8, std::size_t depth = 2) {
    ForecasterConfig cfg;
    cfg.period = period;
    cfg.cycles = cycles;
    cfg.input_len = period * cycles;
    cfg.output_len = out_len;
    cfg.depth = depth;
    cfg.domain = mode;
    return cfg;
}

ModelParams randomized_params(const ForecasterConfig& cfg, std::uint64_t seed) {
    ModelParams p = make_params(cfg.input_len, cfg.output_len, cfg.depth);
    std::mt19937_64 rng(seed);
    for (auto* t : tensors(p)) {
        for (double& v : *t) v = 0.4 * (static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5);
    }
    return p;
}

double full_loss(const ModelParams& p, const ForecasterConfig& cfg,
                 const std::vector<double>& input, const std::vector<double>& target) {
    return mse(forecast(p, cfg, input), target);
}

} // namespace

TEST_SUITE("model") {

TEST_CASE("untrained model equals the averaged-cycle baseline") {
    std::mt19937_64 rng(149);
    for (const DomainMode mode : {DomainMode::frequency, DomainMode::time}) {
        const ForecasterConfig cfg = small_config(mode);
        const ModelParams params = init_params(cfg.input_len, cfg.output_len, cfg.depth, 42);
        for (int rep = 0; rep < 10; ++rep) {
            const auto input = oracles::random_vector(cfg.input_len, rng);
            const auto out = forecast(params, cfg, input);
            const auto base = average_tile(input, cfg.tile(), cfg.output_len);
            REQUIRE(out.size() == base.size());
            for (std::size_t i = 0; i < out.size(); ++i) {
                REQUIRE(std::abs(out[i] - base[i]) < 1e-9);
            }
        }
    }
}

TEST_CASE("constant input with a one-cycle baseline shifts the refinement") {
    // with P = I the baseline of a constant input is the same constant, whose
    // packed spectrum is DC-only; by linearity of the transforms the output
    // is c + insert_idft(stack output)
    const double c = 1.7;
    ForecasterConfig cfg = small_config(DomainMode::frequency, 12, 1, 12, 2);
    const ModelParams params = randomized_params(cfg, 7);
    const std::vector<double> input(cfg.input_len, c);

    const auto out = forecast(params, cfg, input);
    const auto packed_input = dft_extract(input);
    const auto h = stack_forward(params, packed_input.packed);
    const auto refinement = insert_idft({h, Parity::even});
    for (std::size_t i = 0; i < out.size(); ++i) {
        REQUIRE(out[i] == doctest::Approx(c + refinement[i]).epsilon(1e-9));
    }
}

TEST_CASE("packed round trip of the pre-output spectrum is stable") {
    const ForecasterConfig cfg = small_config(DomainMode::frequency);
    const ModelParams params = randomized_params(cfg, 11);
    std::mt19937_64 rng(151);
    const auto input = oracles::random_vector(cfg.input_len, rng);
    const auto out = forecast(params, cfg, input);
    const auto repacked = insert_idft(dft_extract(out));
    for (std::size_t i = 0; i < out.size(); ++i) {
        REQUIRE(std::abs(repacked[i] - out[i]) < 1e-9);
    }
}

TEST_CASE("the two domain modes share a parameter count but not outputs") {
    std::mt19937_64 rng(157);
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t period = 2 + rng() % 8;
        const std::size_t cycles = 1 + rng() % 4;
        const std::size_t out_len = 2 + rng() % 24;
        const std::size_t depth = 1 + rng() % 4;
        const ForecasterConfig fa = small_config(DomainMode::frequency, period, cycles, out_len, depth);
        const ForecasterConfig fb = small_config(DomainMode::time, period, cycles, out_len, depth);
        REQUIRE(param_count(fa) == param_count(fb));
        REQUIRE(param_count(fa) ==
                fa.input_len * out_len + out_len + depth * 2 * (out_len * out_len + out_len));
    }

    // same nonzero weights, generally different outputs
    const ForecasterConfig fa = small_config(DomainMode::frequency);
    const ForecasterConfig fb = small_config(DomainMode::time);
    const ModelParams params = randomized_params(fa, 3);
    const auto input = oracles::random_vector(fa.input_len, rng);
    const auto ya = forecast(params, fa, input);
    const auto yb = forecast(params, fb, input);
    double diff = 0.0;
    for (std::size_t i = 0; i < ya.size(); ++i) diff += std::abs(ya[i] - yb[i]);
    CHECK(diff > 1e-6);
}

TEST_CASE("hand-counted parameter total") {
    const ForecasterConfig cfg = small_config(DomainMode::time, 4, 1, 4, 1);
    CHECK(param_count(cfg) == 60);  // 16 + 4 + 2 * (16 + 4)
}

TEST_CASE("config validation rejects inconsistent shapes") {
    ForecasterConfig cfg = small_config(DomainMode::frequency);
    cfg.depth = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = small_config(DomainMode::frequency);
    cfg.input_len = cfg.input_len + 1;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = small_config(DomainMode::frequency);
    cfg.output_len = 1;  // packing needs at least two samples
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("end-to-end gradients pass finite differences in both modes") {
    std::mt19937_64 rng(163);
    const double h = 1e-5;
    for (const DomainMode mode : {DomainMode::frequency, DomainMode::time}) {
        for (int rep = 0; rep < 3; ++rep) {
            const ForecasterConfig cfg = small_config(mode, 3, 2, 5, 2);
            ModelParams params = randomized_params(cfg, 100 + rep);
            const auto input = oracles::random_vector(cfg.input_len, rng);
            const auto target = oracles::random_vector(cfg.output_len, rng);

            // analytic gradient through the full pipeline
            const std::vector<double> base = average_tile(input, cfg.tile(), cfg.output_len);
            std::vector<double> net_input, base_repr;
            if (mode == DomainMode::frequency) {
                net_input = dft_extract(input).packed;
                base_repr = dft_extract(base).packed;
            } else {
                net_input = input;
                base_repr = base;
            }
            ForwardCache cache;
            std::vector<double> pre_out = stack_forward(params, net_input, &cache);
            for (std::size_t i = 0; i < pre_out.size(); ++i) pre_out[i] += base_repr[i];
            const std::vector<double> out =
                mode == DomainMode::frequency
                    ? insert_idft({pre_out, cfg.output_len % 2 == 0 ? Parity::even : Parity::odd})
                    : pre_out;
            std::vector<double> grad_out(cfg.output_len);
            for (std::size_t i = 0; i < cfg.output_len; ++i) {
                grad_out[i] = 2.0 * (out[i] - target[i]) / static_cast<double>(cfg.output_len);
            }
            const std::vector<double> upstream = mode == DomainMode::frequency
                                                     ? insert_idft_adjoint(grad_out)
                                                     : grad_out;
            const Gradients g = backward(params, cache, upstream);

            auto g_tensors = tensors(g.wrt_params);
            auto p_tensors = tensors(params);
            for (std::size_t t = 0; t < p_tensors.size(); ++t) {
                for (std::size_t i = 0; i < p_tensors[t]->size(); ++i) {
                    double& slot = (*p_tensors[t])[i];
                    const double orig = slot;
                    slot = orig + h;
                    const double up = full_loss(params, cfg, input, target);
                    slot = orig - h;
                    const double down = full_loss(params, cfg, input, target);
                    slot = orig;
                    const double fd = (up - down) / (2.0 * h);
                    const double analytic = (*g_tensors[t])[i];
                    REQUIRE(std::abs(analytic - fd) <=
                            1e-4 * std::max(std::abs(analytic), std::abs(fd)) + 1e-6);
                }
            }
        }
    }
}

TEST_CASE("training is deterministic and never selects worse than the baseline") {
    SyntheticSpec spec;
    spec.n_series = 2;
    spec.t_len = 500;
    spec.period = 8;
    spec.seed = 21;
    const TimeSeriesMatrix data = gen_synthetic(spec);
    const SplitResult parts = chronological_split(data, {0.6, 0.2, 0.2});
    const Normalizer norm = fit_normalizer(parts.train);
    const TimeSeriesMatrix train_n = apply_normalizer(parts.train, norm);
    const TimeSeriesMatrix val_n = apply_normalizer(parts.val, norm);

    ForecasterConfig cfg = small_config(DomainMode::frequency, 8, 1, 8, 2);
    cfg.lr = 1e-3;
    cfg.max_epochs = 3;
    cfg.seed = 77;

    const auto train_w = make_windows(train_n, cfg.input_len, cfg.output_len);
    const auto val_w = make_windows(val_n, cfg.input_len, cfg.output_len);

    const TrainResult a = train(cfg, train_w, val_w);
    const TrainResult b = train(cfg, train_w, val_w);
    CHECK(a.report.train_loss == b.report.train_loss);
    CHECK(a.report.val_loss == b.report.val_loss);
    CHECK(a.report.best_epoch == b.report.best_epoch);
    CHECK(a.report.best_epoch <= a.report.epochs_run);

    // entry 0 of the validation curve is the untrained = baseline error, and
    // the selected weights can only improve on it
    double baseline_val = 0.0;
    for (const auto& w : val_w) {
        baseline_val += mse(average_tile(w.input, cfg.tile(), cfg.output_len), w.target);
    }
    baseline_val /= static_cast<double>(val_w.size());
    CHECK(a.report.val_loss[0] == doctest::Approx(baseline_val).epsilon(1e-9));
    const double selected = evaluate_mse(a.params, cfg, val_w);
    CHECK(selected <= a.report.val_loss[0] + 1e-12);
}

TEST_CASE("lr = 0 leaves the parameters untouched") {
    SyntheticSpec spec;
    spec.n_series = 1;
    spec.t_len = 300;
    spec.period = 6;
    spec.seed = 9;
    const TimeSeriesMatrix data = gen_synthetic(spec);
    ForecasterConfig cfg = small_config(DomainMode::time, 6, 2, 6, 1);
    cfg.lr = 0.0;
    cfg.max_epochs = 2;
    cfg.seed = 5;
    const auto windows = make_windows(data, cfg.input_len, cfg.output_len);
    const std::vector<ForecastWindow> val(windows.begin(), windows.begin() + 10);
    const std::vector<ForecastWindow> trn(windows.begin() + 10, windows.end());

    const TrainResult r = train(cfg, trn, val);
    const ModelParams fresh = init_params(cfg.input_len, cfg.output_len, cfg.depth, cfg.seed);
    auto ta = tensors(r.params);
    auto tb = tensors(fresh);
    for (std::size_t t = 0; t < ta.size(); ++t) {
        REQUIRE(*ta[t] == *tb[t]);
    }
    for (const double v : r.report.val_loss) {
        REQUIRE(v == r.report.val_loss[0]);  // never moves off the baseline
    }
}

TEST_CASE("training errors on empty window sets") {
    const ForecasterConfig cfg = small_config(DomainMode::time);
    const std::vector<ForecastWindow> none;
    ForecastWindow w;
    w.input.assign(cfg.input_len, 0.0);
    w.target.assign(cfg.output_len, 0.0);
    const std::vector<ForecastWindow> one{w};
    CHECK_THROWS_AS(train(cfg, none, one), EmptyTrainingSet);
    CHECK_THROWS_AS(train(cfg, one, none), EmptyTrainingSet);
}

TEST_CASE("a duplicated series earns identical per-series error") {
    // parameter sharing: windows of the copy are identical, so after joint
    // training both series score the same on their own windows
    SyntheticSpec spec;
    spec.n_series = 1;
    spec.t_len = 400;
    spec.period = 8;
    spec.seed = 33;
    const TimeSeriesMatrix one = gen_synthetic(spec);
    TimeSeriesMatrix two;
    two.t_len = one.t_len;
    two.n_series = 2;
    two.series_names = {"a", "b"};
    two.values = one.values;
    two.values.insert(two.values.end(), one.values.begin(), one.values.end());

    const SplitResult parts = chronological_split(two, {0.6, 0.2, 0.2});
    ForecasterConfig cfg = small_config(DomainMode::frequency, 8, 1, 8, 1);
    cfg.lr = 1e-3;
    cfg.max_epochs = 2;
    cfg.seed = 13;
    const auto train_w = make_windows(parts.train, cfg.input_len, cfg.output_len);
    const auto val_w = make_windows(parts.val, cfg.input_len, cfg.output_len);
    const TrainResult r = train(cfg, train_w, val_w);

    const auto preds = predict_dataset(r.params, cfg, parts.test);
    double mse_a = 0.0, mse_b = 0.0;
    std::size_t n_a = 0, n_b = 0;
    for (std::size_t i = 0; i < preds.windows.size(); ++i) {
        const double m = mse(preds.predictions[i], preds.windows[i].target);
        if (preds.windows[i].series_index == 0) {
            mse_a += m;
            ++n_a;
        } else {
            mse_b += m;
            ++n_b;
        }
    }
    REQUIRE(n_a == n_b);
    CHECK(mse_a == mse_b);  // same weights, same windows: bit-identical
}

TEST_CASE("predict_dataset aligns predictions with windows") {
    const ForecasterConfig cfg = small_config(DomainMode::time, 4, 2, 4, 1);
    const ModelParams params = init_params(cfg.input_len, cfg.output_len, cfg.depth, 2);

    TimeSeriesMatrix m;
    m.t_len = cfg.input_len + cfg.output_len;  // exactly one window
    m.n_series = 1;
    m.series_names = {"s0"};
    std::mt19937_64 rng(167);
    m.values = oracles::random_vector(m.t_len, rng);
    const auto preds = predict_dataset(params, cfg, m);
    REQUIRE(preds.windows.size() == 1);
    REQUIRE(preds.predictions.size() == 1);
    CHECK(preds.predictions[0].size() == cfg.output_len);

    TimeSeriesMatrix tiny;
    tiny.t_len = 3;
    tiny.n_series = 1;
    tiny.series_names = {"s0"};
    tiny.values = {1, 2, 3};
    CHECK_THROWS_AS(predict_dataset(params, cfg, tiny), TooShort);
}

TEST_CASE("predictions ignore series order") {
    const ForecasterConfig cfg = small_config(DomainMode::frequency, 6, 1, 6, 1);
    const ModelParams params = randomized_params(cfg, 19);
    SyntheticSpec spec;
    spec.n_series = 3;
    spec.t_len = 60;
    spec.period = 6;
    spec.seed = 12;
    const TimeSeriesMatrix m = gen_synthetic(spec);

    TimeSeriesMatrix swapped = m;  // swap series 0 and 2
    for (std::size_t t = 0; t < m.t_len; ++t) {
        swapped.at(t, 0) = m.at(t, 2);
        swapped.at(t, 2) = m.at(t, 0);
    }

    const auto p1 = predict_dataset(params, cfg, m);
    const auto p2 = predict_dataset(params, cfg, swapped);
    const std::size_t per_series = p1.windows.size() / 3;
    for (std::size_t i = 0; i < per_series; ++i) {
        REQUIRE(p1.predictions[i] == p2.predictions[2 * per_series + i]);
        REQUIRE(p1.predictions[2 * per_series + i] == p2.predictions[i]);
        REQUIRE(p1.predictions[per_series + i] == p2.predictions[per_series + i]);
    }
}

TEST_CASE("normalized predictions invert to the raw-scale pipeline") {
    // the averaging baseline commutes with affine maps, so predicting in
    // z-score space and inverting must match predicting on raw data
    SyntheticSpec spec;
    spec.n_series = 2;
    spec.t_len = 120;
    spec.period = 6;
    spec.seed = 25;
    const TimeSeriesMatrix raw = gen_synthetic(spec);
    const Normalizer norm = fit_normalizer(raw);
    const TimeSeriesMatrix scaled = apply_normalizer(raw, norm);

    const AverageTileConfig tile{6, 2};
    const auto raw_windows = make_windows(raw, 12, 6);
    const auto scaled_windows = make_windows(scaled, 12, 6);
    REQUIRE(raw_windows.size() == scaled_windows.size());
    for (std::size_t i = 0; i < raw_windows.size(); ++i) {
        const auto pred_scaled = average_tile(scaled_windows[i].input, tile, 6);
        const auto pred_raw = average_tile(raw_windows[i].input, tile, 6);
        const std::size_t n = raw_windows[i].series_index;
        for (std::size_t o = 0; o < 6; ++o) {
            const double inverted = pred_scaled[o] * norm.stds[n] + norm.means[n];
            REQUIRE(inverted == doctest::Approx(pred_raw[o]).epsilon(1e-9));
        }
    }
}

TEST_CASE("checkpoints round-trip bit-exactly") {
    ForecasterConfig cfg = small_config(DomainMode::frequency, 5, 2, 7, 2);
    cfg.lr = 3e-4;
    cfg.seed = 99;
    const ModelParams params = init_params(cfg.input_len, cfg.output_len, cfg.depth, cfg.seed);
    const auto path = std::filesystem::temp_directory_path() / "fredo_ckpt_test.json";
    save_checkpoint(path, {cfg, params});
    const Checkpoint loaded = load_checkpoint(path);
    std::filesystem::remove(path);

    CHECK(loaded.config.input_len == cfg.input_len);
    CHECK(loaded.config.domain == cfg.domain);
    CHECK(loaded.config.lr == cfg.lr);
    auto ta = tensors(params);
    auto tb = tensors(loaded.params);
    REQUIRE(ta.size() == tb.size());
    for (std::size_t t = 0; t < ta.size(); ++t) {
        REQUIRE(*ta[t] == *tb[t]);
    }
    CHECK_THROWS_AS(load_checkpoint("/nonexistent/ckpt.json"), MissingFile);
}

} // TEST_SUITE
