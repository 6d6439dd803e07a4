#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "eci/datagen.hpp"
#include "eci/runner.hpp"

namespace eci {

/// One fully expanded run of a suite (method x eta x dataset x seed).
struct SuiteRun {
    std::string key;               // unique: method, dataset, eta, seed
    std::string method_name;
    std::string dataset_name;
    RunConfig config;
    std::shared_ptr<const std::vector<double>> series;   // CSV datasets
    std::optional<SyntheticSpec> synthetic;              // seeded per run
};

struct ExperimentSuite {
    std::vector<SuiteRun> runs;
    std::string output_dir = "out";
    double alpha = 0.1;
};

/// Parse the JSON suite config and expand the run grid. seed_override
/// replaces every run's seed when set.
ExperimentSuite load_suite(const std::string& config_path,
                           std::optional<std::uint64_t> seed_override = {});

struct RunSummary {
    std::string key;
    std::string method;
    std::string dataset;
    double eta = 0.0;
    std::uint64_t seed = 0;
    double alpha = 0.1;
    Metrics metrics;
};

/// Execute every run (worker threads; output ordering is deterministic),
/// writing one trace CSV per run under output_dir.
std::vector<RunSummary> execute_suite(const ExperimentSuite& suite,
                                      int workers = 1);

/// Flat key-value records, one block per run, blank-line separated.
void write_summary(const std::vector<RunSummary>& summaries,
                   const std::string& path);

/// Best eta per (method, dataset): coverage closest to 1 - alpha, ties
/// broken by smaller average width.
std::vector<RunSummary> best_per_method(std::vector<RunSummary> summaries);

/// Emit a generated series in the ingest CSV schema (timestamp,value and
/// the feature columns as extras).
void write_synthetic_csv(const SyntheticSpec& spec, const std::string& path);

} // namespace eci
