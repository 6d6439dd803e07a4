#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <doctest.h>

#include "eci/errors.hpp"
#include "eci/ingest.hpp"

using namespace eci;

namespace {

struct TempCsv {
    std::string path;
    explicit TempCsv(const std::string& contents) {
        path = (std::filesystem::temp_directory_path() /
                ("eci_ingest_test_" +
                 std::to_string(reinterpret_cast<std::uintptr_t>(this)) +
                 ".csv"))
                   .string();
        std::ofstream out(path);
        out << contents;
    }
    ~TempCsv() { std::remove(path.c_str()); }
};

} // namespace

TEST_CASE("log transform") {
    TempCsv csv("timestamp,value\n1,1.0\n2,2.718281828459045\n3,"
                "7.38905609893065\n");
    SeriesFile file{csv.path, "timestamp", "value", SeriesTransform::LOG};
    const auto series = load_series(file);
    REQUIRE(series.values.size() == 3);
    CHECK(series.values[0] == doctest::Approx(0.0));
    CHECK(series.values[1] == doctest::Approx(1.0));
    CHECK(series.values[2] == doctest::Approx(2.0));
}

TEST_CASE("minmax transform") {
    TempCsv csv("timestamp,value\n1,2\n2,4\n3,6\n");
    SeriesFile file{csv.path, "timestamp", "value", SeriesTransform::MINMAX};
    const auto series = load_series(file);
    CHECK(series.values == std::vector<double>{0.0, 0.5, 1.0});
    CHECK(series.raw_min == 2.0);
    CHECK(series.raw_max == 6.0);
}

TEST_CASE("log rejects non-positive values") {
    TempCsv csv("timestamp,value\n1,0\n2,1\n");
    SeriesFile file{csv.path, "timestamp", "value", SeriesTransform::LOG};
    CHECK_THROWS_AS(load_series(file), NonPositiveValueForLog);
}

TEST_CASE("none transform round-trips parsed decimals") {
    TempCsv csv("timestamp,value\n1,0.30000000000000004\n2,-17.25\n3,1e-8\n");
    SeriesFile file{csv.path};
    const auto series = load_series(file);
    CHECK(series.values[0] == 0.30000000000000004);
    CHECK(series.values[1] == -17.25);
    CHECK(series.values[2] == 1e-8);
    CHECK(series.values.size() == 3);   // no silent drops
}

TEST_CASE("missing column") {
    TempCsv csv("time,value\n1,2\n");
    SeriesFile file{csv.path};   // expects "timestamp"
    CHECK_THROWS_AS(load_series(file), MissingColumn);
}

TEST_CASE("unparseable row carries its index") {
    TempCsv csv("timestamp,value\n1,2.0\n2,oops\n");
    SeriesFile file{csv.path};
    CHECK_THROWS_WITH_AS(load_series(file), doctest::Contains("row 2"),
                         UnparseableRow);
}

TEST_CASE("extra columns are ignored, custom names honored") {
    TempCsv csv("date,open,close\n2021-01-01,9,1.5\n2021-01-02,9,2.5\n");
    SeriesFile file{csv.path, "date", "close", SeriesTransform::NONE};
    const auto series = load_series(file);
    CHECK(series.values == std::vector<double>{1.5, 2.5});
}

TEST_CASE("out-of-order timestamps are sorted ascending") {
    TempCsv csv("timestamp,value\n3,30\n1,10\n2,20\n");
    SeriesFile file{csv.path};
    const auto series = load_series(file);
    CHECK(series.values == std::vector<double>{10.0, 20.0, 30.0});
    CHECK(series.timestamps == std::vector<std::string>{"1", "2", "3"});
}

TEST_CASE("numeric timestamps sort numerically") {
    TempCsv csv("timestamp,value\n10,2\n9,1\n");
    SeriesFile file{csv.path};
    const auto series = load_series(file);
    CHECK(series.values == std::vector<double>{1.0, 2.0});
}
