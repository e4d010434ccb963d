// fredo: long-horizon forecasting toolkit command line.
//
// Subcommands: baseline, train, eval, compare-domains, simulate-dgp,
// gen-synthetic, estimate-period. Every run owns one output directory and
// writes a manifest.json describing the resolved configuration and produced
// files. Exit codes are documented in the README.

#include <CLI11.hpp>
#include <json.hpp>

#include <cerrno>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fredo/baseline.hpp"
#include "fredo/checkpoint.hpp"
#include "fredo/dataio.hpp"
#include "fredo/dgpsim.hpp"
#include "fredo/errors.hpp"
#include "fredo/eval.hpp"
#include "fredo/model.hpp"
#include "fredo/runconfig.hpp"
#include "fredo/spectral.hpp"
#include "fredo/synthetic.hpp"

#ifndef FREDO_VERSION
#define FREDO_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using nlohmann::json;
using namespace fredo;

namespace {

// ---------------------------------------------------------------------------
// run bookkeeping

std::string iso_utc_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

class LockedOutputDir {
public:
    explicit LockedOutputDir(const fs::path& dir) : dir_(dir), lock_(dir / ".lock") {
        fs::create_directories(dir_);
        if (fs::exists(lock_)) {
            throw Error("output directory is locked by another run: " + dir_.string() +
                        " (remove " + lock_.string() + " if that run is dead)");
        }
        std::ofstream lock(lock_);
        lock << "pid " << ::getpid() << "\n";
    }

    ~LockedOutputDir() {
        std::error_code ec;
        fs::remove(lock_, ec);
        if (!committed_) {
            for (const auto& f : outputs_) fs::remove(dir_ / f, ec);
        }
    }

    const fs::path& dir() const { return dir_; }

    void write_text(const std::string& name, const std::string& text) {
        std::ofstream out(dir_ / name);
        if (!out.is_open()) {
            throw Error("cannot write " + (dir_ / name).string());
        }
        out << text;
        outputs_.push_back(name);
    }

    void write_json(const std::string& name, const json& doc) {
        write_text(name, doc.dump(2) + "\n");
    }

    /// Write the manifest atomically and keep all outputs.
    void commit(const std::string& command, const ConfigMap& resolved,
                std::uint64_t seed, const std::string& started) {
        json cfg = json::object();
        for (const auto& [k, v] : resolved) cfg[k] = v;
        const json manifest{
            {"command", command},
            {"config", cfg},
            {"seed", seed},
            {"version", std::string("fredo ") + FREDO_VERSION},
            {"started_utc", started},
            {"finished_utc", iso_utc_now()},
            {"outputs", outputs_},
        };
        const fs::path tmp = dir_ / "manifest.json.tmp";
        {
            std::ofstream out(tmp);
            if (!out.is_open()) throw Error("cannot write " + tmp.string());
            out << manifest.dump(2) << "\n";
        }
        fs::rename(tmp, dir_ / "manifest.json");
        committed_ = true;
    }

private:
    fs::path dir_;
    fs::path lock_;
    std::vector<std::string> outputs_;
    bool committed_ = false;
};

// ---------------------------------------------------------------------------
// option resolution: CLI flag beats config file beats default

struct OptionSource {
    CLI::App* cmd = nullptr;
    ConfigBinder* binder = nullptr;  // null when no --config given
    ConfigMap resolved;              // final values, recorded for the manifest

    bool cli_has(const std::string& flag) const { return cmd->count(flag) > 0; }

    void resolve_string(std::string& slot, const std::string& flag, const std::string& key) {
        if (binder) {
            const auto v = binder->take(key);
            if (v && !cli_has(flag)) slot = *v;
        }
        resolved[key] = slot;
    }

    void resolve_u64(std::uint64_t& slot, const std::string& flag, const std::string& key) {
        if (binder) {
            const auto v = binder->take(key);
            if (v && !cli_has(flag)) slot = parse_u64(*v, key);
        }
        resolved[key] = std::to_string(slot);
    }

    void resolve_size(std::size_t& slot, const std::string& flag, const std::string& key) {
        std::uint64_t wide = slot;
        resolve_u64(wide, flag, key);
        slot = static_cast<std::size_t>(wide);
    }

    void resolve_double(double& slot, const std::string& flag, const std::string& key) {
        if (binder) {
            const auto v = binder->take(key);
            if (v && !cli_has(flag)) slot = parse_double_str(*v, key);
        }
        resolved[key] = format_double(slot);
    }

    void record(const std::string& key, const std::string& value) { resolved[key] = value; }

    static std::uint64_t parse_u64(const std::string& s, const std::string& key) {
        try {
            std::size_t pos = 0;
            const std::uint64_t v = std::stoull(s, &pos);
            if (pos != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw ConfigError("config key " + key + ": cannot parse integer \"" + s + "\"");
        }
    }

    static double parse_double_str(const std::string& s, const std::string& key) {
        try {
            std::size_t pos = 0;
            const double v = std::stod(s, &pos);
            if (pos != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw ConfigError("config key " + key + ": cannot parse number \"" + s + "\"");
        }
    }
};

std::vector<double> parse_double_list(const std::string& text, const std::string& what) {
    std::vector<double> out;
    std::string token;
    std::stringstream ss(text);
    while (std::getline(ss, token, ',')) {
        out.push_back(OptionSource::parse_double_str(token, what));
    }
    if (out.empty()) throw ConfigError(what + ": empty list");
    return out;
}

std::vector<std::size_t> parse_size_list(const std::string& text, const std::string& what) {
    std::vector<std::size_t> out;
    std::string token;
    std::stringstream ss(text);
    while (std::getline(ss, token, ',')) {
        out.push_back(static_cast<std::size_t>(OptionSource::parse_u64(token, what)));
    }
    if (out.empty()) throw ConfigError(what + ": empty list");
    return out;
}

SplitSpec parse_split(const std::string& text) {
    const auto parts = parse_double_list(text, "split");
    if (parts.size() != 3) throw ConfigError("split needs exactly 3 fractions");
    SplitSpec spec{parts[0], parts[1], parts[2]};
    spec.validate();
    return spec;
}

// ---------------------------------------------------------------------------
// shared argument bundles

struct DataArgs {
    std::string path;
    std::string timestamp_col;
    std::string split_text = "0.7,0.1,0.2";

    void add_flags(CLI::App* cmd) {
        cmd->add_option("--data", path, "input CSV file")->required();
        cmd->add_option("--timestamp-col", timestamp_col,
                        "header name of a timestamp column to drop");
        cmd->add_option("--split", split_text,
                        "train,val,test fractions (default 0.7,0.1,0.2)");
    }

    void resolve(OptionSource& src) {
        src.resolve_string(path, "--data", "data.path");
        src.resolve_string(timestamp_col, "--timestamp-col", "data.timestamp_col");
        src.resolve_string(split_text, "--split", "data.split");
    }

    TimeSeriesMatrix load() const {
        return load_csv(path, timestamp_col.empty()
                                  ? std::optional<std::string>{}
                                  : std::optional<std::string>{timestamp_col});
    }
};

struct ModelArgs {
    std::size_t input_len = 0;  // 0: derive from cycles * period
    std::size_t output_len = 0;
    std::size_t period = 0;     // 0: estimate from the training split
    std::size_t cycles = 0;     // 0: derive from input_len / period
    std::size_t depth = 2;
    std::string domain = "frequency";
    double lr = 1e-4;
    std::size_t batch_size = 32;
    std::size_t patience = 3;
    std::size_t max_epochs = 10;

    void add_flags(CLI::App* cmd) {
        cmd->add_option("--input-len", input_len, "input window length I (= cycles * period)");
        cmd->add_option("--output-len", output_len, "forecast horizon O")->required();
        cmd->add_option("--period", period, "cycle length P (omit to estimate from data)");
        cmd->add_option("--cycles", cycles, "whole cycles in the input window");
        cmd->add_option("--depth", depth, "number of Mixer blocks");
        cmd->add_option("--domain", domain, "frequency|time");
        cmd->add_option("--lr", lr, "Adam learning rate");
        cmd->add_option("--batch-size", batch_size, "mini-batch size");
        cmd->add_option("--patience", patience, "early-stopping patience (epochs)");
        cmd->add_option("--max-epochs", max_epochs, "training epoch cap");
    }

    void resolve(OptionSource& src) {
        src.resolve_size(input_len, "--input-len", "model.input_len");
        src.resolve_size(output_len, "--output-len", "model.output_len");
        src.resolve_size(period, "--period", "model.period");
        src.resolve_size(cycles, "--cycles", "model.cycles");
        src.resolve_size(depth, "--depth", "model.depth");
        src.resolve_string(domain, "--domain", "model.domain");
        src.resolve_double(lr, "--lr", "train.lr");
        src.resolve_size(batch_size, "--batch-size", "train.batch_size");
        src.resolve_size(patience, "--patience", "train.patience");
        src.resolve_size(max_epochs, "--max-epochs", "train.max_epochs");
    }

    /// Fill the (period, cycles, input_len) triple, estimating the period
    /// from the training slice when none was given.
    ForecasterConfig to_config(const TimeSeriesMatrix& train_slice, std::uint64_t seed,
                               OptionSource& src) {
        ForecasterConfig cfg;
        std::size_t p = period;
        if (p == 0) {
            p = majority_period(train_slice);
            src.record("model.period", std::to_string(p));
        }
        std::size_t r = cycles;
        std::size_t in_len = input_len;
        if (r == 0 && in_len == 0) {
            r = 1;
            in_len = p;
        } else if (r == 0) {
            if (in_len % p != 0) {
                throw ConfigError("input_len " + std::to_string(in_len) +
                                  " is not a multiple of period " + std::to_string(p));
            }
            r = in_len / p;
        } else if (in_len == 0) {
            in_len = r * p;
        }
        src.record("model.input_len", std::to_string(in_len));
        src.record("model.cycles", std::to_string(r));

        cfg.input_len = in_len;
        cfg.output_len = output_len;
        cfg.period = p;
        cfg.cycles = r;
        cfg.depth = depth;
        cfg.domain = domain_mode_from_string(domain);
        cfg.lr = lr;
        cfg.batch_size = batch_size;
        cfg.patience = patience;
        cfg.max_epochs = max_epochs;
        cfg.seed = seed;
        cfg.validate();
        return cfg;
    }

    static std::size_t majority_period(const TimeSeriesMatrix& m) {
        const std::size_t max_period = std::max<std::size_t>(2, m.t_len / 4);
        std::map<std::size_t, std::size_t> votes;
        for (std::size_t n = 0; n < m.n_series; ++n) {
            ++votes[estimate_period(m.series(n), max_period)];
        }
        std::size_t best = 1, best_votes = 0;
        for (const auto& [p, v] : votes) {  // ties fall to the smaller period
            if (v > best_votes) {
                best = p;
                best_votes = v;
            }
        }
        return best;
    }
};

std::string curve_to_csv(const ErrorCurve& curve) {
    std::string text = "horizon,mse,mae\n";
    for (std::size_t o = 0; o < curve.horizon_mse.size(); ++o) {
        text += std::to_string(o) + "," + format_double(curve.horizon_mse[o]) + "," +
                format_double(curve.horizon_mae[o]) + "\n";
    }
    return text;
}

json curve_to_json(const ErrorCurve& curve) {
    return json{{"mse", curve.aggregate_mse}, {"mae", curve.aggregate_mae}};
}

// ---------------------------------------------------------------------------
// subcommands

struct CommonArgs {
    std::string out_dir;
    std::string config_path;
    std::uint64_t seed = 0;

    void add_flags(CLI::App* cmd) {
        cmd->add_option("--out", out_dir, "output directory (one run per directory)")->required();
        cmd->add_option("--config", config_path, "key-value config file");
        cmd->add_option("--seed", seed, "random seed");
    }

    OptionSource make_source(CLI::App* cmd, std::optional<ConfigBinder>& binder_slot) const {
        OptionSource src;
        src.cmd = cmd;
        if (!config_path.empty()) {
            binder_slot.emplace(parse_config_file(config_path));
            src.binder = &*binder_slot;
        }
        return src;
    }
};

int cmd_baseline(CLI::App* cmd, const CommonArgs& common, DataArgs& data,
                 std::size_t output_len, std::size_t period, std::size_t cycles,
                 std::size_t input_len, const std::string& search_text,
                 std::size_t max_input_len) {
    const std::string started = iso_utc_now();
    std::optional<ConfigBinder> binder;
    OptionSource src = common.make_source(cmd, binder);
    data.resolve(src);
    std::uint64_t seed = common.seed;
    src.resolve_u64(seed, "--seed", "seed");
    src.resolve_size(output_len, "--output-len", "model.output_len");
    src.resolve_size(period, "--period", "model.period");
    if (binder) binder->finish();

    LockedOutputDir out(common.out_dir);
    const TimeSeriesMatrix raw = data.load();
    const SplitSpec split = parse_split(data.split_text);
    const SplitResult parts = chronological_split(raw, split);
    const Normalizer norm = fit_normalizer(parts.train);
    const TimeSeriesMatrix val_n = apply_normalizer(parts.val, norm);
    const TimeSeriesMatrix test_n = apply_normalizer(parts.test, norm);

    if (period == 0) {
        period = ModelArgs::majority_period(apply_normalizer(parts.train, norm));
        src.record("model.period", std::to_string(period));
    }

    json search_report;
    if (!search_text.empty()) {
        const auto candidates = parse_size_list(search_text, "search-r");
        const CycleSearchResult found =
            search_cycles(val_n, period, candidates, output_len, max_input_len);
        cycles = found.best_cycles;
        json table = json::object();
        for (const auto& [r, err] : found.mse_by_cycles) {
            table[std::to_string(r)] = err;
        }
        search_report = json{{"candidates", candidates},
                             {"validation_mse", table},
                             {"chosen_cycles", cycles}};
        src.record("baseline.search_r", search_text);
    } else if (cycles == 0) {
        if (input_len > 0) {
            if (input_len % period != 0) {
                throw ConfigError("input_len must be a multiple of the period");
            }
            cycles = input_len / period;
        } else {
            cycles = 1;
        }
    }
    src.record("baseline.cycles", std::to_string(cycles));

    const AverageTileConfig tile{period, cycles};
    const std::size_t in_len = tile.input_len();
    const auto windows = make_windows(test_n, in_len, output_len);
    std::vector<std::vector<double>> preds;
    preds.reserve(windows.size());
    for (const auto& w : windows) {
        preds.push_back(average_tile(w.input, tile, output_len));
    }
    const ErrorCurve curve = error_curve(preds, windows);

    json metrics{
        {"model", "average_tile"},
        {"period", period},
        {"cycles", cycles},
        {"input_len", in_len},
        {"output_len", output_len},
        {"test", curve_to_json(curve)},
        {"n_test_windows", windows.size()},
    };
    if (!search_report.is_null()) metrics["search"] = search_report;
    out.write_json("metrics.json", metrics);
    out.write_text("error_curve.csv", curve_to_csv(curve));
    out.commit("baseline", src.resolved, seed, started);
    return 0;
}

int cmd_train(CLI::App* cmd, const CommonArgs& common, DataArgs& data, ModelArgs& model) {
    const std::string started = iso_utc_now();
    std::optional<ConfigBinder> binder;
    OptionSource src = common.make_source(cmd, binder);
    data.resolve(src);
    model.resolve(src);
    std::uint64_t seed = common.seed;
    src.resolve_u64(seed, "--seed", "train.seed");
    if (binder) binder->finish();

    LockedOutputDir out(common.out_dir);
    const TimeSeriesMatrix raw = data.load();
    const SplitSpec split = parse_split(data.split_text);
    const SplitResult parts = chronological_split(raw, split);
    const Normalizer norm = fit_normalizer(parts.train);
    const TimeSeriesMatrix train_n = apply_normalizer(parts.train, norm);
    const TimeSeriesMatrix val_n = apply_normalizer(parts.val, norm);

    const ForecasterConfig cfg = model.to_config(train_n, seed, src);
    const auto train_w = make_windows(train_n, cfg.input_len, cfg.output_len);
    const auto val_w = make_windows(val_n, cfg.input_len, cfg.output_len);
    const TrainResult result = train(cfg, train_w, val_w);

    save_checkpoint(out.dir() / "checkpoint.json", {cfg, result.params});
    const json metrics{
        {"model", to_string(cfg.domain) == "frequency" ? "fredo" : "timedo"},
        {"epochs_run", result.report.epochs_run},
        {"best_epoch", result.report.best_epoch},
        {"train_loss", result.report.train_loss},
        {"val_loss", result.report.val_loss},
        {"n_train_windows", train_w.size()},
        {"n_val_windows", val_w.size()},
        {"param_count", param_count(cfg)},
    };
    out.write_json("metrics.json", metrics);
    // manifest (not metrics) carries the wall time so metric files stay
    // byte-identical across reruns
    src.record("train.wall_seconds", format_double(result.report.wall_seconds));
    out.commit("train", src.resolved, seed, started);
    return 0;
}

int cmd_eval(CLI::App* cmd, const CommonArgs& common, DataArgs& data,
             const std::string& checkpoint_path) {
    const std::string started = iso_utc_now();
    std::optional<ConfigBinder> binder;
    OptionSource src = common.make_source(cmd, binder);
    data.resolve(src);
    std::uint64_t seed = common.seed;
    src.resolve_u64(seed, "--seed", "seed");
    src.record("eval.checkpoint", checkpoint_path);
    if (binder) binder->finish();

    LockedOutputDir out(common.out_dir);
    const Checkpoint ckpt = load_checkpoint(checkpoint_path);
    const TimeSeriesMatrix raw = data.load();
    const SplitSpec split = parse_split(data.split_text);
    const SplitResult parts = chronological_split(raw, split);
    const Normalizer norm = fit_normalizer(parts.train);
    const TimeSeriesMatrix test_n = apply_normalizer(parts.test, norm);

    const PredictionSet preds = predict_dataset(ckpt.params, ckpt.config, test_n);
    const ErrorCurve curve = error_curve(preds.predictions, preds.windows);
    const json metrics{
        {"model", to_string(ckpt.config.domain) == "frequency" ? "fredo" : "timedo"},
        {"input_len", ckpt.config.input_len},
        {"output_len", ckpt.config.output_len},
        {"test", curve_to_json(curve)},
        {"n_test_windows", preds.windows.size()},
    };
    out.write_json("metrics.json", metrics);
    out.write_text("error_curve.csv", curve_to_csv(curve));
    out.commit("eval", src.resolved, seed, started);
    return 0;
}

int cmd_compare_domains(CLI::App* cmd, const CommonArgs& common, DataArgs& data,
                        ModelArgs& model) {
    const std::string started = iso_utc_now();
    std::optional<ConfigBinder> binder;
    OptionSource src = common.make_source(cmd, binder);
    data.resolve(src);
    model.resolve(src);
    std::uint64_t seed = common.seed;
    src.resolve_u64(seed, "--seed", "train.seed");
    if (binder) binder->finish();

    LockedOutputDir out(common.out_dir);
    const TimeSeriesMatrix raw = data.load();
    const SplitSpec split = parse_split(data.split_text);
    // per-series configs share one template; period may be auto-estimated
    const SplitResult parts = chronological_split(raw, split);
    const ForecasterConfig cfg = model.to_config(parts.train, seed, src);

    const DomainComparison cmp = univariate_compare(raw, cfg, split, seed);
    const json ttest{
        {"n", cmp.mse_test.n},
        {"mean_diff", cmp.mse_test.mean_diff},
        {"t_stat", cmp.mse_test.t_stat},
        {"p_value", cmp.mse_test.p_value},
        {"significant_at_5pct", cmp.mse_test.significant_at_5pct},
        {"metric", "mse"},
        {"arm_a", "frequency"},
        {"arm_b", "time"},
    };
    out.write_json("ttest.json", ttest);
    const json metrics{
        {"mean_mse_frequency", cmp.mean_mse_a},
        {"mean_mse_time", cmp.mean_mse_b},
        {"mean_mse_baseline", cmp.mean_baseline_mse},
        {"per_series",
         json{{"mse_frequency", cmp.mse_a},
              {"mse_time", cmp.mse_b},
              {"mae_frequency", cmp.mae_a},
              {"mae_time", cmp.mae_b},
              {"mse_baseline", cmp.baseline_mse}}},
        {"param_count_per_model", param_count(cfg)},
    };
    out.write_json("metrics.json", metrics);
    out.commit("compare-domains", src.resolved, seed, started);
    return 0;
}

int cmd_simulate_dgp(CLI::App* cmd, const CommonArgs& common, std::string theta_text,
                     double c, double sigma2, std::size_t horizons, std::size_t trials) {
    const std::string started = iso_utc_now();
    std::optional<ConfigBinder> binder;
    OptionSource src = common.make_source(cmd, binder);
    std::uint64_t seed = common.seed;
    src.resolve_u64(seed, "--seed", "dgp.seed");
    src.resolve_string(theta_text, "--theta", "dgp.theta");
    src.resolve_double(c, "--c", "dgp.c");
    src.resolve_double(sigma2, "--sigma2", "dgp.sigma2");
    src.resolve_size(horizons, "--horizons", "dgp.horizons");
    src.resolve_size(trials, "--trials", "dgp.trials");
    if (binder) binder->finish();

    if (horizons == 0) throw ConfigError("--horizons must be >= 1");
    ARProcess proc;
    proc.theta = parse_double_list(theta_text, "theta");
    proc.c = c;
    proc.sigma2 = sigma2;
    proc.validate();

    LockedOutputDir out(common.out_dir);
    const std::size_t k = horizons - 1;  // rows cover horizons 0 .. horizons-1
    const auto analytic = analytic_forecast_variance(proc, k);
    const auto empirical = monte_carlo_forecast_variance(proc, k, trials, seed);

    std::string csv = "horizon,analytic_var,empirical_var\n";
    for (std::size_t j = 0; j <= k; ++j) {
        csv += std::to_string(j) + "," + format_double(analytic[j]) + "," +
               format_double(empirical[j]) + "\n";
    }
    out.write_text("variance.csv", csv);
    out.commit("simulate-dgp", src.resolved, seed, started);
    return 0;
}

int cmd_gen_synthetic(CLI::App* cmd, const CommonArgs& common, SyntheticSpec spec) {
    const std::string started = iso_utc_now();
    std::optional<ConfigBinder> binder;
    OptionSource src = common.make_source(cmd, binder);
    std::uint64_t seed = common.seed;
    src.resolve_u64(seed, "--seed", "synthetic.seed");
    spec.seed = seed;
    src.resolve_size(spec.n_series, "--series", "synthetic.series");
    src.resolve_size(spec.t_len, "--length", "synthetic.length");
    src.resolve_size(spec.period, "--period", "synthetic.period");
    src.resolve_size(spec.harmonics, "--harmonics", "synthetic.harmonics");
    src.resolve_double(spec.noise_scale, "--noise-scale", "synthetic.noise_scale");
    src.resolve_double(spec.ar_coeff, "--ar-coeff", "synthetic.ar_coeff");
    if (binder) binder->finish();

    LockedOutputDir out(common.out_dir);
    const TimeSeriesMatrix m = gen_synthetic(spec);
    std::string csv;
    for (std::size_t n = 0; n < m.n_series; ++n) {
        csv += (n ? "," : "") + m.series_names[n];
    }
    csv += "\n";
    for (std::size_t t = 0; t < m.t_len; ++t) {
        for (std::size_t n = 0; n < m.n_series; ++n) {
            csv += (n ? "," : "") + format_double(m.at(t, n));
        }
        csv += "\n";
    }
    out.write_text("dataset.csv", csv);
    out.commit("gen-synthetic", src.resolved, seed, started);
    return 0;
}

int cmd_estimate_period(CLI::App* cmd, const CommonArgs& common, DataArgs& data,
                        std::size_t max_period) {
    const std::string started = iso_utc_now();
    std::optional<ConfigBinder> binder;
    OptionSource src = common.make_source(cmd, binder);
    data.resolve(src);
    std::uint64_t seed = common.seed;
    src.resolve_u64(seed, "--seed", "seed");
    src.resolve_size(max_period, "--max-period", "period.max_period");
    if (binder) binder->finish();

    LockedOutputDir out(common.out_dir);
    const TimeSeriesMatrix m = data.load();
    const std::size_t cap =
        max_period > 0 ? max_period : std::max<std::size_t>(2, m.t_len / 4);
    json periods = json::object();
    for (std::size_t n = 0; n < m.n_series; ++n) {
        const std::size_t p = estimate_period(m.series(n), cap);
        periods[m.series_names[n]] = p;
        std::printf("%s: %zu\n", m.series_names[n].c_str(), p);
    }
    out.write_json("metrics.json", json{{"periods", periods}, {"max_period", cap}});
    out.commit("estimate-period", src.resolved, seed, started);
    return 0;
}

int dispatch_error() {
    try {
        throw;  // rethrow current exception to classify it
    } catch (const MissingFile& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const MissingColumn& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    } catch (const EmptyDataset& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const NoFeasibleCandidate& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 6;
    } catch (const TooFewPairs& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 6;
    } catch (const ZeroVarianceDifferences& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 6;
    } catch (const EmptyTrainingSet& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 7;
    } catch (const NonFiniteLoss& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 7;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 5;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 1;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"fredo: long-horizon time-series forecasting toolkit"};
    app.require_subcommand(1);

    // baseline
    auto* sub_baseline = app.add_subcommand("baseline", "evaluate the averaging baseline");
    CommonArgs base_common;
    DataArgs base_data;
    std::size_t base_output_len = 0, base_period = 0, base_cycles = 0, base_input_len = 0;
    std::size_t base_max_input = 0;
    std::string base_search;
    base_common.add_flags(sub_baseline);
    base_data.add_flags(sub_baseline);
    sub_baseline->add_option("--output-len", base_output_len, "forecast horizon O")->required();
    sub_baseline->add_option("--period", base_period, "cycle length P (omit to estimate)");
    sub_baseline->add_option("--r", base_cycles, "whole cycles in the input window");
    sub_baseline->add_option("--input-len", base_input_len, "input length I (= r * P)");
    sub_baseline->add_option("--search-r", base_search,
                             "comma list of cycle counts to search on validation");
    sub_baseline->add_option("--max-input-len", base_max_input,
                             "cap on I during the search (0 = none)");

    // train
    auto* sub_train = app.add_subcommand("train", "train a forecaster");
    CommonArgs train_common;
    DataArgs train_data;
    ModelArgs train_model;
    train_common.add_flags(sub_train);
    train_data.add_flags(sub_train);
    train_model.add_flags(sub_train);

    // eval
    auto* sub_eval = app.add_subcommand("eval", "evaluate a checkpoint on the test split");
    CommonArgs eval_common;
    DataArgs eval_data;
    std::string eval_checkpoint;
    eval_common.add_flags(sub_eval);
    eval_data.add_flags(sub_eval);
    sub_eval->add_option("--checkpoint", eval_checkpoint, "checkpoint.json from train")
        ->required();

    // compare-domains
    auto* sub_cmp = app.add_subcommand(
        "compare-domains", "train per-series frequency vs time models and compare");
    CommonArgs cmp_common;
    DataArgs cmp_data;
    ModelArgs cmp_model;
    cmp_common.add_flags(sub_cmp);
    cmp_data.add_flags(sub_cmp);
    cmp_model.add_flags(sub_cmp);

    // simulate-dgp
    auto* sub_dgp = app.add_subcommand("simulate-dgp",
                                       "analytic vs Monte-Carlo forecast variance of an AR process");
    CommonArgs dgp_common;
    std::string dgp_theta;
    double dgp_c = 0.0, dgp_sigma2 = 1.0;
    std::size_t dgp_horizons = 51, dgp_trials = 100000;
    dgp_common.add_flags(sub_dgp);
    sub_dgp->add_option("--theta", dgp_theta, "comma list of AR coefficients")->required();
    sub_dgp->add_option("--c", dgp_c, "constant term");
    sub_dgp->add_option("--sigma2", dgp_sigma2, "innovation variance");
    sub_dgp->add_option("--horizons", dgp_horizons, "number of horizons (rows) to emit");
    sub_dgp->add_option("--trials", dgp_trials, "Monte-Carlo sample paths");

    // gen-synthetic
    auto* sub_gen = app.add_subcommand("gen-synthetic", "write the bundled synthetic dataset");
    CommonArgs gen_common;
    SyntheticSpec gen_spec;
    gen_common.add_flags(sub_gen);
    sub_gen->add_option("--series", gen_spec.n_series, "number of series");
    sub_gen->add_option("--length", gen_spec.t_len, "time steps per series");
    sub_gen->add_option("--period", gen_spec.period, "base cycle length");
    sub_gen->add_option("--harmonics", gen_spec.harmonics, "sinusoids per series");
    sub_gen->add_option("--noise-scale", gen_spec.noise_scale, "AR noise innovation std");
    sub_gen->add_option("--ar-coeff", gen_spec.ar_coeff, "AR(1) coefficient of the noise");

    // estimate-period
    auto* sub_period = app.add_subcommand("estimate-period",
                                          "dominant cycle length per series");
    CommonArgs period_common;
    DataArgs period_data;
    std::size_t period_max = 0;
    period_common.add_flags(sub_period);
    period_data.add_flags(sub_period);
    sub_period->add_option("--max-period", period_max, "largest period considered (0 = T/4)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sub_baseline->parsed()) {
            return cmd_baseline(sub_baseline, base_common, base_data, base_output_len,
                                base_period, base_cycles, base_input_len, base_search,
                                base_max_input);
        }
        if (sub_train->parsed()) {
            return cmd_train(sub_train, train_common, train_data, train_model);
        }
        if (sub_eval->parsed()) {
            return cmd_eval(sub_eval, eval_common, eval_data, eval_checkpoint);
        }
        if (sub_cmp->parsed()) {
            return cmd_compare_domains(sub_cmp, cmp_common, cmp_data, cmp_model);
        }
        if (sub_dgp->parsed()) {
            return cmd_simulate_dgp(sub_dgp, dgp_common, dgp_theta, dgp_c, dgp_sigma2,
                                    dgp_horizons, dgp_trials);
        }
        if (sub_gen->parsed()) {
            return cmd_gen_synthetic(sub_gen, gen_common, gen_spec);
        }
        if (sub_period->parsed()) {
            return cmd_estimate_period(sub_period, period_common, period_data, period_max);
        }
    } catch (...) {
        return dispatch_error();
    }
    return 2;
}
