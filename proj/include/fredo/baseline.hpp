#ifndef FREDO_BASELINE_HPP
#define FREDO_BASELINE_HPP

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "fredo/dataio.hpp"

namespace fredo {

/// Configuration of the averaging baseline: the input must hold `cycles`
/// whole cycles of length `period` (input_len = cycles * period).
struct AverageTileConfig {
    std::size_t period = 1;
    std::size_t cycles = 1;

    std::size_t input_len() const { return period * cycles; }
};

/// Zero-parameter baseline: average the observed cycles element-wise, then
/// tile the averaged cycle across the forecast horizon:
///   out[o] = (1/r) * sum_{i=1..r} input[I + (o mod P) - i*P].
/// Throws LengthMismatch if input.size() != cycles * period.
std::vector<double> average_tile(std::span<const double> input,
                                 const AverageTileConfig& cfg,
                                 std::size_t output_len);

struct CycleSearchResult {
    std::size_t best_cycles = 0;
    /// (candidate, mean validation MSE), in candidate order. Infeasible
    /// candidates (window longer than the validation slice) are omitted.
    std::vector<std::pair<std::size_t, double>> mse_by_cycles;
};

/// Evaluate the baseline on every window of `validation` for each candidate
/// cycle count and return the candidate with minimal mean MSE (ties go to the
/// smaller candidate). Candidates with cycles * period > max_input_len
/// (when max_input_len > 0) or cycles * period + output_len > T are skipped.
/// Throws NoFeasibleCandidate when nothing survives.
CycleSearchResult search_cycles(const TimeSeriesMatrix& validation,
                                std::size_t period,
                                const std::vector<std::size_t>& candidates,
                                std::size_t output_len,
                                std::size_t max_input_len = 0);

} // namespace fredo

#endif // FREDO_BASELINE_HPP
