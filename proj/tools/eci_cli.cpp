#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "eci/errors.hpp"
#include "eci/suite.hpp"
#include "eci/verify.hpp"

namespace {

using nlohmann::json;

int cmd_run(const std::string& config_path, const std::string& out_override,
            int workers, std::optional<std::uint64_t> seed_override) {
    auto suite = eci::load_suite(config_path, seed_override);
    if (!out_override.empty()) {
        suite.output_dir = out_override;
    }
    const auto summaries = eci::execute_suite(suite, workers);
    namespace fs = std::filesystem;
    eci::write_summary(summaries,
                       (fs::path(suite.output_dir) / "summary.txt").string());
    eci::write_summary(eci::best_per_method(summaries),
                       (fs::path(suite.output_dir) / "best.txt").string());
    std::cout << summaries.size() << " runs written to " << suite.output_dir
              << '\n';
    return 0;
}

eci::BatteryConfig battery_from_json(const json& j) {
    eci::BatteryConfig cfg;
    if (j.contains("checks")) {
        cfg.checks = j.at("checks").get<std::vector<std::string>>();
        if (cfg.checks.empty()) {
            throw eci::ConfigError("EmptySuite: no checks configured");
        }
    }
    cfg.seed = j.value("seed", cfg.seed);
    cfg.alpha = j.value("alpha", cfg.alpha);
    cfg.c = j.value("c", cfg.c);
    cfg.score_bound = j.value("score_bound", cfg.score_bound);
    if (j.contains("theorem1")) {
        const auto& t = j.at("theorem1");
        cfg.theorem1.score_bound = t.value("score_bound", cfg.theorem1.score_bound);
        cfg.theorem1.alpha = t.value("alpha", cfg.theorem1.alpha);
        cfg.theorem1.eta = t.value("eta", cfg.theorem1.eta);
        cfg.theorem1.c = t.value("c", cfg.theorem1.c);
        cfg.theorem1.horizon = t.value("horizon", cfg.theorem1.horizon);
        cfg.theorem1_seeds = t.value("seeds", cfg.theorem1_seeds);
    }
    if (j.contains("propositions")) {
        const auto& p = j.at("propositions");
        cfg.proposition_seeds = p.value("seeds", cfg.proposition_seeds);
        cfg.proposition_horizon = p.value("horizon", cfg.proposition_horizon);
        cfg.proposition_eta_max = p.value("eta_max", cfg.proposition_eta_max);
    }
    if (j.contains("theorem2")) {
        const auto& t = j.at("theorem2");
        cfg.theorem2_schedules = t.value("schedules", cfg.theorem2_schedules);
        cfg.theorem2_horizon = t.value("horizon", cfg.theorem2_horizon);
    }
    return cfg;
}

int cmd_verify(const std::string& config_path) {
    eci::BatteryConfig cfg;
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) {
            throw eci::ConfigError("cannot open config file: " + config_path);
        }
        json j;
        in >> j;
        cfg = battery_from_json(j);
    }
    const auto result = eci::run_battery(cfg);
    for (const auto& line : result.lines) {
        std::cout << line << '\n';
    }
    std::cout << "total violations: " << result.total_violations << '\n';
    return result.total_violations == 0 ? 0 : 1;
}

int cmd_gen(const std::string& config_path, const std::string& out_path,
            std::optional<std::uint64_t> seed_override) {
    eci::SyntheticSpec spec = eci::changepoint_spec(0);
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) {
            throw eci::ConfigError("cannot open config file: " + config_path);
        }
        json j;
        in >> j;
        if (j.contains("segments")) {
            spec.segments.clear();
            for (const auto& seg : j.at("segments")) {
                spec.segments.push_back(
                    {seg.at("beta").get<std::vector<double>>(),
                     seg.at("length").get<std::size_t>()});
            }
            spec.feature_dim = spec.segments.front().beta.size();
        }
        spec.noise_sd = j.value("noise_sd", spec.noise_sd);
        spec.seed = j.value("seed", spec.seed);
    }
    if (seed_override) {
        spec.seed = *seed_override;
    }
    eci::write_synthetic_csv(spec, out_path);
    std::cout << "wrote " << out_path << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Online conformal prediction experiment harness"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    int workers = 1;
    std::optional<std::uint64_t> seed_override;

    auto add_common = [&](CLI::App* sub, bool config_required) {
        auto* opt = sub->add_option("--config", config_path, "config file");
        if (config_required) opt->required();
        sub->add_option("--seed-override", seed_override,
                        "replace every configured seed");
    };

    auto* run = app.add_subcommand("run", "execute an experiment suite");
    add_common(run, true);
    run->add_option("--out", out_dir, "output directory");
    run->add_option("--workers", workers, "worker thread count");

    auto* verify = app.add_subcommand("verify", "run the theorem battery");
    add_common(verify, false);

    auto* gen = app.add_subcommand("gen", "emit a synthetic series CSV");
    add_common(gen, false);
    std::string gen_out = "synthetic.csv";
    gen->add_option("--out", gen_out, "output CSV path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            return cmd_run(config_path, out_dir, workers, seed_override);
        }
        if (verify->parsed()) {
            return cmd_verify(config_path);
        }
        if (gen->parsed()) {
            return cmd_gen(config_path, gen_out, seed_override);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
