#include "fredo/baseline.hpp"

#include <limits>
#include <string>

#include "fredo/errors.hpp"
#include "fredo/nn.hpp"

namespace fredo {

std::vector<double> average_tile(std::span<const double> input,
                                 const AverageTileConfig& cfg,
                                 std::size_t output_len) {
    if (cfg.period == 0 || cfg.cycles == 0) {
        throw LengthMismatch("period and cycle count must be positive");
    }
    const std::size_t in_len = cfg.input_len();
    if (input.size() != in_len) {
        throw LengthMismatch("input length " + std::to_string(input.size()) +
                             " != cycles*period = " + std::to_string(in_len));
    }

    // Average the cycles once; summation runs from the most recent cycle
    // backwards, matching out[o] = (1/r) * sum_{i=1..r} input[I + q - i*P]
    // term for term so a direct evaluation is bit-identical.
    const std::size_t period = cfg.period;
    std::vector<double> cycle(period);
    for (std::size_t q = 0; q < period; ++q) {
        double sum = 0.0;
        for (std::size_t i = 1; i <= cfg.cycles; ++i) {
            sum += input[in_len + q - i * period];
        }
        cycle[q] = sum / static_cast<double>(cfg.cycles);
    }

    std::vector<double> out(output_len);
    for (std::size_t o = 0; o < output_len; ++o) {
        out[o] = cycle[o % period];
    }
    return out;
}

CycleSearchResult search_cycles(const TimeSeriesMatrix& validation,
                                std::size_t period,
                                const std::vector<std::size_t>& candidates,
                                std::size_t output_len,
                                std::size_t max_input_len) {
    if (candidates.empty()) {
        throw NoFeasibleCandidate("empty candidate list");
    }
    CycleSearchResult result;
    double best_mse = std::numeric_limits<double>::infinity();
    for (const std::size_t r : candidates) {
        if (r == 0) continue;
        const std::size_t in_len = r * period;
        if (max_input_len > 0 && in_len > max_input_len) continue;
        if (in_len + output_len > validation.t_len) continue;

        const AverageTileConfig cfg{period, r};
        const auto windows = make_windows(validation, in_len, output_len);
        double total = 0.0;
        for (const auto& w : windows) {
            total += mse(average_tile(w.input, cfg, output_len), w.target);
        }
        const double mean_mse = total / static_cast<double>(windows.size());
        result.mse_by_cycles.emplace_back(r, mean_mse);
        const bool better = mean_mse < best_mse ||
                            (mean_mse == best_mse && r < result.best_cycles);
        if (better) {
            best_mse = mean_mse;
            result.best_cycles = r;
        }
    }
    if (result.mse_by_cycles.empty()) {
        throw NoFeasibleCandidate("no candidate fits the validation slice");
    }
    return result;
}

} // namespace fredo
