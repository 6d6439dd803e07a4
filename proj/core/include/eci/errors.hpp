#pragma once

#include <stdexcept>
#include <string>

namespace eci {

struct InsufficientHistory : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EmptyHistory : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MissingColumn : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonPositiveValueForLog : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnparseableRow : std::runtime_error {
    UnparseableRow(std::size_t row, const std::string& what)
        : std::runtime_error("row " + std::to_string(row) + ": " + what),
          row_index(row) {}
    std::size_t row_index;
};

struct EmptyTrace : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct HypothesisViolated : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace eci
