#ifndef FREDO_ERRORS_HPP
#define FREDO_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fredo {

/// Base class for every error raised by this library. Each concrete error
/// maps to one CLI exit code (see the table in the README).
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// -- data loading ------------------------------------------------------------

class MissingFile : public Error {
public:
    explicit MissingFile(const std::string& path)
        : Error("no such file: " + path), path(path) {}
    std::string path;
};

class MissingColumn : public Error {
public:
    explicit MissingColumn(const std::string& name)
        : Error("column not found in header: " + name), name(name) {}
    std::string name;
};

/// Non-numeric cell. Coordinates are 1-based: `row` counts data rows
/// (header excluded), `col` counts retained (non-timestamp) columns.
class ParseError : public Error {
public:
    ParseError(std::size_t row, std::size_t col, const std::string& cell)
        : Error("cannot parse cell \"" + cell + "\" at row " + std::to_string(row) +
                ", col " + std::to_string(col)),
          row(row), col(col) {}
    std::size_t row;
    std::size_t col;
};

class EmptyDataset : public Error {
public:
    using Error::Error;
};

class DegenerateSplit : public Error {
public:
    using Error::Error;
};

class ConstantSeries : public Error {
public:
    explicit ConstantSeries(std::size_t series)
        : Error("series " + std::to_string(series) + " has zero variance"),
          series(series) {}
    std::size_t series;
};

// -- shape / length checks ----------------------------------------------------

class ShapeMismatch : public Error {
public:
    using Error::Error;
};

class TooShort : public Error {
public:
    using Error::Error;
};

class EmptyInput : public Error {
public:
    using Error::Error;
};

class LengthMismatch : public Error {
public:
    using Error::Error;
};

// -- search / statistics -------------------------------------------------------

class NoFeasibleCandidate : public Error {
public:
    using Error::Error;
};

class TooFewPairs : public Error {
public:
    using Error::Error;
};

class ZeroVarianceDifferences : public Error {
public:
    using Error::Error;
};

// -- training -----------------------------------------------------------------

class EmptyTrainingSet : public Error {
public:
    using Error::Error;
};

class NonFiniteLoss : public Error {
public:
    using Error::Error;
};

// -- configuration --------------------------------------------------------------

class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace fredo

#endif // FREDO_ERRORS_HPP
