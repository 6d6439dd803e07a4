#include "eci/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include "eci/errors.hpp"

namespace eci {

SeriesTransform transform_from_string(const std::string& name) {
    if (name == "none") return SeriesTransform::NONE;
    if (name == "log") return SeriesTransform::LOG;
    if (name == "minmax") return SeriesTransform::MINMAX;
    throw ConfigError("unknown transform: " + name);
}

std::string to_string(SeriesTransform transform) {
    switch (transform) {
    case SeriesTransform::NONE: return "none";
    case SeriesTransform::LOG: return "log";
    case SeriesTransform::MINMAX: return "minmax";
    }
    return "?";
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) {
        out.push_back(field);
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

// Timestamps sort numerically when they parse as numbers, otherwise
// lexicographically (covers ISO-8601 dates).
bool timestamp_less(const std::string& a, const std::string& b) {
    double da, db;
    auto ra = std::from_chars(a.data(), a.data() + a.size(), da);
    auto rb = std::from_chars(b.data(), b.data() + b.size(), db);
    if (ra.ec == std::errc() && ra.ptr == a.data() + a.size() &&
        rb.ec == std::errc() && rb.ptr == b.data() + b.size()) {
        return da < db;
    }
    return a < b;
}

} // namespace

LoadedSeries load_series(const SeriesFile& file) {
    std::ifstream in(file.path);
    if (!in) {
        throw ConfigError("cannot open series file: " + file.path);
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw ConfigError("empty series file: " + file.path);
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split_csv_line(line);
    auto find_col = [&](const std::string& name) -> std::size_t {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) {
            throw MissingColumn("column '" + name + "' not found in " +
                                file.path);
        }
        return static_cast<std::size_t>(it - header.begin());
    };
    const std::size_t ts_col = find_col(file.timestamp_column);
    const std::size_t val_col = find_col(file.value_column);

    std::vector<std::pair<std::string, double>> rows;
    std::size_t row_index = 0;
    while (std::getline(in, line)) {
        ++row_index;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() <= std::max(ts_col, val_col)) {
            throw UnparseableRow(row_index, "too few fields");
        }
        const std::string& raw = fields[val_col];
        double value;
        auto res = std::from_chars(raw.data(), raw.data() + raw.size(), value);
        if (res.ec != std::errc() || res.ptr != raw.data() + raw.size() ||
            !std::isfinite(value)) {
            throw UnparseableRow(row_index, "bad value '" + raw + "'");
        }
        rows.emplace_back(fields[ts_col], value);
    }
    if (rows.empty()) {
        throw ConfigError("no data rows in " + file.path);
    }

    if (!std::is_sorted(rows.begin(), rows.end(), [](auto& a, auto& b) {
            return timestamp_less(a.first, b.first);
        })) {
        std::cerr << "warning: out-of-order timestamps in " << file.path
                  << ", sorting ascending\n";
        std::stable_sort(rows.begin(), rows.end(), [](auto& a, auto& b) {
            return timestamp_less(a.first, b.first);
        });
    }

    LoadedSeries out;
    out.transform = file.transform;
    out.timestamps.reserve(rows.size());
    out.values.reserve(rows.size());
    for (auto& [ts, v] : rows) {
        out.timestamps.push_back(std::move(ts));
        out.values.push_back(v);
    }
    out.raw_min = *std::min_element(out.values.begin(), out.values.end());
    out.raw_max = *std::max_element(out.values.begin(), out.values.end());

    switch (file.transform) {
    case SeriesTransform::NONE:
        break;
    case SeriesTransform::LOG:
        for (std::size_t i = 0; i < out.values.size(); ++i) {
            if (out.values[i] <= 0.0) {
                throw NonPositiveValueForLog(
                    "non-positive value " + std::to_string(out.values[i]) +
                    " at row " + std::to_string(i + 1));
            }
            out.values[i] = std::log(out.values[i]);
        }
        break;
    case SeriesTransform::MINMAX: {
        const double range = out.raw_max - out.raw_min;
        for (double& v : out.values) {
            v = range > 0.0 ? (v - out.raw_min) / range : 0.0;
        }
        break;
    }
    }
    return out;
}

} // namespace eci
