#pragma once

#include <string>
#include <vector>

namespace eci {

enum class SeriesTransform { NONE, LOG, MINMAX };

SeriesTransform transform_from_string(const std::string& name);
std::string to_string(SeriesTransform transform);

struct SeriesFile {
    std::string path;
    std::string timestamp_column = "timestamp";
    std::string value_column = "value";
    SeriesTransform transform = SeriesTransform::NONE;
};

struct LoadedSeries {
    std::vector<std::string> timestamps;
    std::vector<double> values;           // transformed, time order
    SeriesTransform transform = SeriesTransform::NONE;
    // MINMAX parameters of the raw data, recorded so widths can be
    // related back to raw units if needed.
    double raw_min = 0.0;
    double raw_max = 0.0;
};

/// Load a univariate CSV series (comma-separated, header required, extra
/// columns ignored). Out-of-order timestamps are sorted ascending with a
/// warning on stderr. Throws MissingColumn, UnparseableRow,
/// NonPositiveValueForLog.
LoadedSeries load_series(const SeriesFile& file);

} // namespace eci
