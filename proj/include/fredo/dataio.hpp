#ifndef FREDO_DATAIO_HPP
#define FREDO_DATAIO_HPP

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fredo {

/// T x N observation matrix, stored column-major so each series is contiguous.
/// Immutable after construction; safe to share across threads.
struct TimeSeriesMatrix {
    std::vector<double> values;             // column-major: values[n * t_len + t]
    std::vector<std::string> series_names;  // length N
    std::size_t t_len = 0;                  // T
    std::size_t n_series = 0;               // N

    double at(std::size_t t, std::size_t n) const { return values[n * t_len + t]; }
    double& at(std::size_t t, std::size_t n) { return values[n * t_len + t]; }

    /// Contiguous view of one series (length T).
    std::span<const double> series(std::size_t n) const {
        return {values.data() + n * t_len, t_len};
    }
};

/// Chronological split fractions. Must each lie in (0,1) and sum to 1.
struct SplitSpec {
    double train_frac = 0.7;
    double val_frac = 0.1;
    double test_frac = 0.2;

    void validate() const;  // throws ConfigError
};

/// Per-series z-score statistics fitted on the training slice.
struct Normalizer {
    std::vector<double> means;
    std::vector<double> stds;  // population std, all > 0
};

/// One supervised example: `input` holds the input_len most recent values
/// before time `origin`, `target` the output_len values from `origin` on.
struct ForecastWindow {
    std::size_t origin = 0;
    std::size_t series_index = 0;
    std::vector<double> input;
    std::vector<double> target;
};

struct SplitResult {
    TimeSeriesMatrix train;
    TimeSeriesMatrix val;
    TimeSeriesMatrix test;
};

/// Load a CSV time-series file: UTF-8, comma separated, first row is the
/// header. If `timestamp_column` names a header entry, that column is dropped
/// without being parsed. Every remaining cell must parse as a real number.
///
/// Throws MissingFile, MissingColumn, EmptyDataset (fewer than 2 data rows),
/// ParseError(row, col) with 1-based data-row / retained-column coordinates.
TimeSeriesMatrix load_csv(const std::filesystem::path& path,
                          const std::optional<std::string>& timestamp_column = {});

/// Split rows chronologically: first floor(T*train_frac) rows, then
/// floor(T*val_frac), remainder to test. Throws DegenerateSplit if any part
/// would be empty.
SplitResult chronological_split(const TimeSeriesMatrix& m, const SplitSpec& spec);

/// Fit per-series mean and population standard deviation.
/// Throws ConstantSeries(n) on a zero-variance column.
Normalizer fit_normalizer(const TimeSeriesMatrix& train);

/// Column-wise (x - mean) / std. Throws ShapeMismatch.
TimeSeriesMatrix apply_normalizer(const TimeSeriesMatrix& m, const Normalizer& norm);

/// Exact inverse of apply_normalizer. Throws ShapeMismatch.
TimeSeriesMatrix invert_normalizer(const TimeSeriesMatrix& m, const Normalizer& norm);

/// All per-series windows with origins {input_len, input_len + stride, ...}
/// and origin + output_len <= T, ordered by (series, origin).
/// Throws TooShort if T < input_len + output_len.
std::vector<ForecastWindow> make_windows(const TimeSeriesMatrix& m,
                                         std::size_t input_len,
                                         std::size_t output_len,
                                         std::size_t stride = 1);

} // namespace fredo

#endif // FREDO_DATAIO_HPP
