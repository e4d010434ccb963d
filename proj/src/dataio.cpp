#include "fredo/dataio.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fredo/errors.hpp"

namespace fredo {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        cells.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') {
        cells.emplace_back();
    }
    return cells;
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

bool parse_double(const std::string& cell, double& out) {
    const std::string t = trim(cell);
    if (t.empty()) return false;
    const char* begin = t.data();
    const char* end = begin + t.size();
    const auto res = std::from_chars(begin, end, out);
    return res.ec == std::errc{} && res.ptr == end && std::isfinite(out);
}

TimeSeriesMatrix take_rows(const TimeSeriesMatrix& m, std::size_t begin, std::size_t count) {
    TimeSeriesMatrix out;
    out.t_len = count;
    out.n_series = m.n_series;
    out.series_names = m.series_names;
    out.values.resize(count * m.n_series);
    for (std::size_t n = 0; n < m.n_series; ++n) {
        for (std::size_t t = 0; t < count; ++t) {
            out.at(t, n) = m.at(begin + t, n);
        }
    }
    return out;
}

} // namespace

void SplitSpec::validate() const {
    const double parts[]{train_frac, val_frac, test_frac};
    for (double f : parts) {
        if (!(f > 0.0 && f < 1.0)) {
            throw ConfigError("split fractions must each lie in (0,1)");
        }
    }
    if (std::abs(train_frac + val_frac + test_frac - 1.0) > 1e-12) {
        throw ConfigError("split fractions must sum to 1");
    }
}

TimeSeriesMatrix load_csv(const std::filesystem::path& path,
                          const std::optional<std::string>& timestamp_column) {
    std::ifstream file(path);
    if (!file.is_open()) {
        throw MissingFile(path.string());
    }

    std::string line;
    if (!std::getline(file, line)) {
        throw EmptyDataset("file has no header row: " + path.string());
    }
    std::vector<std::string> header = split_line(line);
    for (auto& h : header) h = trim(h);

    std::size_t ts_col = header.size();  // sentinel: no timestamp column
    if (timestamp_column) {
        const auto it = std::find(header.begin(), header.end(), *timestamp_column);
        if (it == header.end()) {
            throw MissingColumn(*timestamp_column);
        }
        ts_col = static_cast<std::size_t>(it - header.begin());
    }

    std::vector<std::string> names;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (c != ts_col) names.push_back(header[c]);
    }
    if (names.empty()) {
        throw EmptyDataset("no value columns in " + path.string());
    }

    std::vector<std::vector<double>> columns(names.size());
    std::size_t data_row = 0;
    while (std::getline(file, line)) {
        if (trim(line).empty()) continue;
        ++data_row;
        const std::vector<std::string> cells = split_line(line);
        if (cells.size() != header.size()) {
            throw ParseError(data_row, cells.size(), "wrong cell count");
        }
        std::size_t out_col = 0;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (c == ts_col) continue;
            ++out_col;
            double v = 0.0;
            if (!parse_double(cells[c], v)) {
                throw ParseError(data_row, out_col, trim(cells[c]));
            }
            columns[out_col - 1].push_back(v);
        }
    }
    if (data_row < 2) {
        throw EmptyDataset("need at least 2 data rows, got " + std::to_string(data_row));
    }

    TimeSeriesMatrix m;
    m.t_len = data_row;
    m.n_series = names.size();
    m.series_names = std::move(names);
    m.values.resize(m.t_len * m.n_series);
    for (std::size_t n = 0; n < m.n_series; ++n) {
        std::copy(columns[n].begin(), columns[n].end(), m.values.begin() + n * m.t_len);
    }
    return m;
}

SplitResult chronological_split(const TimeSeriesMatrix& m, const SplitSpec& spec) {
    spec.validate();
    // Small epsilon absorbs one-ulp products like 10 * 0.7.
    const std::size_t n_train = static_cast<std::size_t>(
        std::floor(static_cast<double>(m.t_len) * spec.train_frac + 1e-9));
    const std::size_t n_val = static_cast<std::size_t>(
        std::floor(static_cast<double>(m.t_len) * spec.val_frac + 1e-9));
    if (n_train == 0 || n_val == 0 || n_train + n_val >= m.t_len) {
        throw DegenerateSplit("split of " + std::to_string(m.t_len) +
                              " rows leaves an empty part");
    }
    SplitResult out;
    out.train = take_rows(m, 0, n_train);
    out.val = take_rows(m, n_train, n_val);
    out.test = take_rows(m, n_train + n_val, m.t_len - n_train - n_val);
    return out;
}

Normalizer fit_normalizer(const TimeSeriesMatrix& train) {
    Normalizer norm;
    norm.means.resize(train.n_series);
    norm.stds.resize(train.n_series);
    for (std::size_t n = 0; n < train.n_series; ++n) {
        const auto col = train.series(n);
        double sum = 0.0;
        for (double v : col) sum += v;
        const double mean = sum / static_cast<double>(train.t_len);
        double sq = 0.0;
        for (double v : col) sq += (v - mean) * (v - mean);
        const double var = sq / static_cast<double>(train.t_len);  // population
        if (!(var > 0.0)) {
            throw ConstantSeries(n);
        }
        norm.means[n] = mean;
        norm.stds[n] = std::sqrt(var);
    }
    return norm;
}

TimeSeriesMatrix apply_normalizer(const TimeSeriesMatrix& m, const Normalizer& norm) {
    if (norm.means.size() != m.n_series || norm.stds.size() != m.n_series) {
        throw ShapeMismatch("normalizer fitted for " + std::to_string(norm.means.size()) +
                            " series, matrix has " + std::to_string(m.n_series));
    }
    TimeSeriesMatrix out = m;
    for (std::size_t n = 0; n < m.n_series; ++n) {
        for (std::size_t t = 0; t < m.t_len; ++t) {
            out.at(t, n) = (m.at(t, n) - norm.means[n]) / norm.stds[n];
        }
    }
    return out;
}

TimeSeriesMatrix invert_normalizer(const TimeSeriesMatrix& m, const Normalizer& norm) {
    if (norm.means.size() != m.n_series || norm.stds.size() != m.n_series) {
        throw ShapeMismatch("normalizer fitted for " + std::to_string(norm.means.size()) +
                            " series, matrix has " + std::to_string(m.n_series));
    }
    TimeSeriesMatrix out = m;
    for (std::size_t n = 0; n < m.n_series; ++n) {
        for (std::size_t t = 0; t < m.t_len; ++t) {
            out.at(t, n) = m.at(t, n) * norm.stds[n] + norm.means[n];
        }
    }
    return out;
}

std::vector<ForecastWindow> make_windows(const TimeSeriesMatrix& m,
                                         std::size_t input_len,
                                         std::size_t output_len,
                                         std::size_t stride) {
    if (input_len == 0 || output_len == 0 || stride == 0) {
        throw LengthMismatch("window lengths and stride must be positive");
    }
    if (m.t_len < input_len + output_len) {
        throw TooShort("need T >= " + std::to_string(input_len + output_len) +
                       " rows, got " + std::to_string(m.t_len));
    }
    std::vector<ForecastWindow> windows;
    for (std::size_t n = 0; n < m.n_series; ++n) {
        const auto col = m.series(n);
        for (std::size_t t = input_len; t + output_len <= m.t_len; t += stride) {
            ForecastWindow w;
            w.origin = t;
            w.series_index = n;
            w.input.assign(col.begin() + (t - input_len), col.begin() + t);
            w.target.assign(col.begin() + t, col.begin() + t + output_len);
            windows.push_back(std::move(w));
        }
    }
    return windows;
}

} // namespace fredo
