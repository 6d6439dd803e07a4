#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "eci/calibrators.hpp"
#include "eci/datagen.hpp"
#include "eci/forecasters.hpp"
#include "eci/runner.hpp"

namespace {

std::vector<double> uniform_scores(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    std::vector<double> out(n);
    for (auto& s : out) s = dist(gen);
    return out;
}

void BM_CalibratorStep(benchmark::State& state) {
    const auto kind = static_cast<eci::CalibratorKind>(state.range(0));
    const auto scores = uniform_scores(1 << 14, 1);
    eci::CalibratorParams params;
    for (auto _ : state) {
        eci::Calibrator calibrator(kind, params);
        for (double s : scores) {
            benchmark::DoNotOptimize(calibrator.step(s, 0.05, 0.5));
        }
    }
    state.SetItemsProcessed(state.iterations() *
                            static_cast<int64_t>(scores.size()));
}
BENCHMARK(BM_CalibratorStep)
    ->Arg(static_cast<int>(eci::CalibratorKind::OGD))
    ->Arg(static_cast<int>(eci::CalibratorKind::ECI))
    ->Arg(static_cast<int>(eci::CalibratorKind::ECI_INTEGRAL))
    ->Arg(static_cast<int>(eci::CalibratorKind::ACI))
    ->Arg(static_cast<int>(eci::CalibratorKind::PID));

void BM_IncrementalArPredict(benchmark::State& state) {
    const auto data = eci::generate(eci::changepoint_spec(3));
    eci::ForecasterConfig cfg;
    for (auto _ : state) {
        eci::Forecaster forecaster(cfg);
        std::vector<double> history;
        history.reserve(data.y.size());
        double acc = 0.0;
        for (double y : data.y) {
            history.push_back(y);
            if (history.size() >= static_cast<std::size_t>(cfg.min_history)) {
                acc += forecaster.predict(history);
            }
        }
        benchmark::DoNotOptimize(acc);
    }
    state.SetItemsProcessed(state.iterations() *
                            static_cast<int64_t>(data.y.size()));
}
BENCHMARK(BM_IncrementalArPredict);

void BM_OnlineRun(benchmark::State& state) {
    const auto data = eci::generate(eci::changepoint_spec(5));
    eci::RunConfig cfg;
    cfg.method = eci::CalibratorKind::ECI;
    for (auto _ : state) {
        benchmark::DoNotOptimize(eci::run_online(data.y, cfg));
    }
}
BENCHMARK(BM_OnlineRun);

} // namespace

BENCHMARK_MAIN();
