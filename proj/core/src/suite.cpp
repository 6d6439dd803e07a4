#include "eci/suite.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "eci/errors.hpp"
#include "eci/ingest.hpp"
#include "eci/text.hpp"

namespace eci {

namespace {

using nlohmann::json;

MethodParams method_params_from_json(const json& j, double alpha, double eta,
                                     const MethodParams& defaults) {
    MethodParams p = defaults;
    p.alpha = alpha;
    p.eta = eta;
    p.c = j.value("c", p.c);
    p.h = j.value("h", p.h);
    p.gamma = j.value("gamma", p.gamma);
    p.window = j.value("window", p.window);
    p.pid_k_i = j.value("k_i", p.pid_k_i);
    p.pid_c_sat = j.value("c_sat", p.pid_c_sat);
    p.pid_linear_integrator =
        j.value("linear_integrator", p.pid_linear_integrator);
    p.pid_theta_scorecaster =
        j.value("theta_scorecaster", p.pid_theta_scorecaster);
    p.decay_epsilon = j.value("decay_epsilon", p.decay_epsilon);
    if (j.contains("adaptive_rate")) {
        p.adaptive_rate = j.at("adaptive_rate").get<bool>();
    }
    return p;
}

std::vector<double> eta_grid(const json& j, double fallback) {
    if (!j.contains("eta")) return {fallback};
    const auto& e = j.at("eta");
    if (e.is_array()) return e.get<std::vector<double>>();
    return {e.get<double>()};
}

ForecasterConfig forecaster_from_json(const json& j) {
    ForecasterConfig cfg;
    cfg.kind = forecaster_kind_from_string(j.value("kind", std::string("ar")));
    cfg.ar_order = j.value("order", cfg.ar_order);
    cfg.min_history = j.value("min_history", cfg.min_history);
    cfg.refit_every = j.value("refit_every", cfg.refit_every);
    cfg.include_intercept = j.value("include_intercept", cfg.include_intercept);
    return cfg;
}

SyntheticSpec synthetic_from_json(const json& j) {
    if (j.value("changepoint", false) || !j.contains("segments")) {
        SyntheticSpec spec = changepoint_spec(0);
        spec.noise_sd = j.value("noise_sd", spec.noise_sd);
        return spec;
    }
    SyntheticSpec spec;
    spec.noise_sd = j.value("noise_sd", 1.0);
    for (const auto& seg : j.at("segments")) {
        SyntheticSegment s;
        s.beta = seg.at("beta").get<std::vector<double>>();
        s.length = seg.at("length").get<std::size_t>();
        spec.segments.push_back(std::move(s));
    }
    spec.feature_dim =
        j.value("feature_dim", spec.segments.empty()
                                   ? std::size_t{1}
                                   : spec.segments.front().beta.size());
    return spec;
}

std::string run_key(const std::string& method, const std::string& dataset,
                    double eta, std::uint64_t seed) {
    return strfmt("%s__%s__eta%g__seed%llu", method.c_str(), dataset.c_str(),
                  eta, static_cast<unsigned long long>(seed));
}

} // namespace

ExperimentSuite load_suite(const std::string& config_path,
                           std::optional<std::uint64_t> seed_override) {
    std::ifstream in(config_path);
    if (!in) {
        throw ConfigError("cannot open config file: " + config_path);
    }
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }

    ExperimentSuite suite;
    suite.alpha = j.value("alpha", 0.1);
    suite.output_dir = j.value("output", std::string("out"));
    const double rolling_window = j.value("rolling_window", 50);
    const double train_fraction = j.value("train_fraction", 0.0);
    const bool symmetric = j.value("symmetric", false);
    const ForecasterConfig forecaster =
        forecaster_from_json(j.value("forecaster", json::object()));
    MethodParams defaults;
    defaults.window = j.value("window", defaults.window);

    if (!j.contains("methods") || j.at("methods").empty()) {
        throw ConfigError("config has no methods");
    }
    if (!j.contains("datasets") || j.at("datasets").empty()) {
        throw ConfigError("config has no datasets");
    }

    struct Dataset {
        std::string name;
        std::vector<std::uint64_t> seeds;
        std::shared_ptr<const std::vector<double>> series;
        std::optional<SyntheticSpec> synthetic;
    };
    std::vector<Dataset> datasets;
    for (const auto& dj : j.at("datasets")) {
        Dataset d;
        d.name = dj.at("name").get<std::string>();
        d.seeds = dj.value("seeds", std::vector<std::uint64_t>{0});
        if (dj.contains("synthetic")) {
            d.synthetic = synthetic_from_json(dj.at("synthetic"));
        } else if (dj.contains("csv")) {
            const auto& cj = dj.at("csv");
            SeriesFile file;
            file.path = cj.at("path").get<std::string>();
            file.timestamp_column =
                cj.value("timestamp", file.timestamp_column);
            file.value_column = cj.value("value", file.value_column);
            file.transform = transform_from_string(
                cj.value("transform", std::string("none")));
            d.series = std::make_shared<const std::vector<double>>(
                load_series(file).values);
        } else {
            throw ConfigError("dataset '" + d.name +
                              "' needs a synthetic or csv source");
        }
        datasets.push_back(std::move(d));
    }

    const double default_eta = j.value("eta", 0.05);
    for (const auto& mj_raw : j.at("methods")) {
        const json mj = mj_raw.is_string()
                            ? json{{"name", mj_raw.get<std::string>()}}
                            : mj_raw;
        const auto method_name = mj.at("name").get<std::string>();
        const CalibratorKind kind = calibrator_kind_from_string(method_name);
        for (double eta : eta_grid(mj, default_eta)) {
            for (const auto& dataset : datasets) {
                for (std::uint64_t seed : dataset.seeds) {
                    SuiteRun run;
                    run.method_name = method_name;
                    run.dataset_name = dataset.name;
                    run.series = dataset.series;
                    run.synthetic = dataset.synthetic;
                    run.config.method = kind;
                    run.config.params = method_params_from_json(
                        mj, suite.alpha, eta, defaults);
                    run.config.forecaster = forecaster;
                    run.config.rolling_window =
                        static_cast<int>(rolling_window);
                    run.config.train_fraction = train_fraction;
                    run.config.symmetric = symmetric;
                    run.config.seed =
                        seed_override ? *seed_override : seed;
                    run.key = run_key(method_name, dataset.name, eta,
                                      run.config.seed);
                    suite.runs.push_back(std::move(run));
                }
            }
        }
    }
    return suite;
}

std::vector<RunSummary> execute_suite(const ExperimentSuite& suite,
                                      int workers) {
    namespace fs = std::filesystem;
    fs::create_directories(suite.output_dir);
    std::vector<RunSummary> summaries(suite.runs.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::string first_error;
    std::mutex error_mutex;

    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= suite.runs.size() || failed.load()) return;
            const auto& run = suite.runs[i];
            try {
                std::vector<double> generated;
                const std::vector<double>* series = run.series.get();
                if (run.synthetic) {
                    SyntheticSpec spec = *run.synthetic;
                    spec.seed = run.config.seed;
                    generated = generate(spec).y;
                    series = &generated;
                }
                auto trace = run_online(*series, run.config);
                RunSummary s;
                s.key = run.key;
                s.method = run.method_name;
                s.dataset = run.dataset_name;
                s.eta = run.config.params.eta;
                s.seed = run.config.seed;
                s.alpha = run.config.params.alpha;
                s.metrics =
                    coverage_metrics(trace, run.config.rolling_window);
                write_trace_csv(trace, (fs::path(suite.output_dir) /
                                        (run.key + ".csv"))
                                           .string());
                summaries[i] = std::move(s);
            } catch (const std::exception& e) {
                std::scoped_lock lock(error_mutex);
                if (!failed.exchange(true)) {
                    first_error = "run '" + run.key + "' failed: " + e.what();
                }
            }
        }
    };

    const int n_workers = std::max(1, workers);
    std::vector<std::thread> pool;
    for (int i = 0; i < n_workers - 1; ++i) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    if (failed.load()) {
        throw ConfigError(first_error);
    }
    std::sort(summaries.begin(), summaries.end(),
              [](const RunSummary& a, const RunSummary& b) {
                  return a.key < b.key;
              });
    return summaries;
}

namespace {

std::string fmt_number(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return strfmt("%.17g", v);
}

void write_record(std::ofstream& out, const RunSummary& s) {
    out << "key = " << s.key << '\n'
        << "method = " << s.method << '\n'
        << "dataset = " << s.dataset << '\n'
        << "eta = " << fmt_number(s.eta) << '\n'
        << "seed = " << s.seed << '\n'
        << "alpha = " << fmt_number(s.alpha) << '\n'
        << "coverage_pct = " << fmt_number(100.0 * s.metrics.coverage) << '\n'
        << "avg_width = " << fmt_number(s.metrics.avg_width) << '\n'
        << "median_width = " << fmt_number(s.metrics.median_width) << '\n';
}

} // namespace

void write_summary(const std::vector<RunSummary>& summaries,
                   const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write summary: " + path);
    bool first = true;
    for (const auto& s : summaries) {
        if (!first) out << '\n';
        first = false;
        write_record(out, s);
    }
}

std::vector<RunSummary> best_per_method(std::vector<RunSummary> summaries) {
    // Average over seeds per (method, dataset, eta) first, then pick the
    // eta whose mean coverage lands closest to the target.
    struct Agg {
        RunSummary rep;
        double coverage_sum = 0.0;
        double width_sum = 0.0;
        bool width_inf = false;
        std::size_t count = 0;
    };
    std::map<std::string, Agg> groups;
    for (auto& s : summaries) {
        const auto gk = strfmt("%s|%s|%g", s.method.c_str(),
                               s.dataset.c_str(), s.eta);
        auto& agg = groups[gk];
        if (agg.count == 0) agg.rep = s;
        agg.coverage_sum += s.metrics.coverage;
        if (std::isinf(s.metrics.avg_width)) {
            agg.width_inf = true;
        } else {
            agg.width_sum += s.metrics.avg_width;
        }
        ++agg.count;
    }
    std::map<std::string, RunSummary> best;
    for (auto& [gk, agg] : groups) {
        RunSummary s = agg.rep;
        s.metrics.coverage = agg.coverage_sum / static_cast<double>(agg.count);
        s.metrics.avg_width =
            agg.width_inf ? std::numeric_limits<double>::infinity()
                          : agg.width_sum / static_cast<double>(agg.count);
        s.key = strfmt("%s__%s__eta%g", s.method.c_str(),
                       s.dataset.c_str(), s.eta);
        const auto bk = s.method + "|" + s.dataset;
        auto it = best.find(bk);
        auto gap = [](const RunSummary& r) {
            return std::abs(r.metrics.coverage - (1.0 - r.alpha));
        };
        if (it == best.end() || gap(s) < gap(it->second) ||
            (gap(s) == gap(it->second) &&
             s.metrics.avg_width < it->second.metrics.avg_width)) {
            best[bk] = std::move(s);
        }
    }
    std::vector<RunSummary> out;
    out.reserve(best.size());
    for (auto& [_, s] : best) out.push_back(std::move(s));
    return out;
}

void write_synthetic_csv(const SyntheticSpec& spec, const std::string& path) {
    const auto data = generate(spec);
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write series: " + path);
    out << "timestamp,value";
    for (std::size_t j = 0; j < spec.feature_dim; ++j) {
        out << ",x" << j + 1;
    }
    out << '\n';
    for (std::size_t t = 0; t < data.y.size(); ++t) {
        out << t << ',' << fmt_number(data.y[t]);
        for (double v : data.x[t]) {
            out << ',' << fmt_number(v);
        }
        out << '\n';
    }
}

} // namespace eci
