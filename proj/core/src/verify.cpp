#include "eci/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "eci/calibrators.hpp"
#include "eci/text.hpp"
#include "eci/errors.hpp"
#include "eci/smoothing.hpp"

namespace eci {

namespace {

struct TrajectoryStep {
    double q_before = 0.0;
    double score = 0.0;
    int err = 0;
    double rate = 0.0;
};

// ECI in symmetric single-score mode with explicit per-step rates.
std::vector<TrajectoryStep> eci_trajectory(std::span<const double> scores,
                                           std::span<const double> rates,
                                           double q_init, double alpha,
                                           double c, bool clamp_at_zero) {
    const SmoothingKernel kernel{c};
    ThresholdState state{q_init, 1, alpha};
    std::vector<TrajectoryStep> out;
    out.reserve(scores.size());
    for (std::size_t t = 0; t < scores.size(); ++t) {
        TrajectoryStep step;
        step.q_before = state.q;
        step.score = scores[t];
        step.rate = rates[t];
        auto fb = eci_update(state, scores[t], rates[t], kernel);
        step.err = fb.err;
        if (clamp_at_zero) {
            state.q = std::max(state.q, 0.0);
        }
        out.push_back(step);
    }
    return out;
}

double effective_lambda(double lambda) {
    return lambda > 0.0 ? lambda : lambda_sup(SmoothingKernel{1.0});
}

} // namespace

int theorem_window(double alpha) {
    return static_cast<int>(std::floor(1.0 / alpha));
}

double theorem1_c_limit(const TheoremConfig& config) {
    const double n = theorem_window(config.alpha);
    const double lambda = effective_lambda(config.lambda);
    const double bracket =
        config.score_bound + (1.0 - config.alpha + lambda) * config.eta;
    double limit = std::min(config.eta, n * n) / (2.0 * n * n * bracket);
    // The miss-spacing recursion additionally needs, for k = 1..N-1,
    //   eta (1 - k alpha) - eta (k-1) c bracket - B > 0,
    // which is stricter than the headline constant once eta is large.
    for (int k = 1; k < static_cast<int>(n); ++k) {
        const double numerator =
            1.0 - k * config.alpha - config.score_bound / config.eta;
        const double denom = std::max(k - 1, 1) * bracket;
        limit = std::min(limit, numerator / denom);
    }
    return limit;
}

TheoremConfig validate_theorem1(TheoremConfig config) {
    if (config.alpha <= 0.0 || config.alpha >= 1.0) {
        throw HypothesisViolated("alpha must lie in (0,1)");
    }
    if (config.score_bound <= 0.0) {
        throw HypothesisViolated("score bound B must be positive");
    }
    config.lambda = effective_lambda(config.lambda);
    const double n = theorem_window(config.alpha);
    if (config.eta <= 2.0 * n * config.score_bound) {
        throw HypothesisViolated(
            strfmt("eta = %g does not exceed 2NB = %g", config.eta,
                   2.0 * n * config.score_bound));
    }
    const double limit = theorem1_c_limit(config);
    if (config.c <= 0.0) {
        config.c = 0.9 * limit;
    } else if (config.c >= limit) {
        throw HypothesisViolated(strfmt(
            "c = %g is not below the admissible limit %g", config.c, limit));
    }
    return config;
}

ViolationReport check_theorem1(const TheoremConfig& raw,
                               std::span<const double> scores) {
    const TheoremConfig config = validate_theorem1(raw);
    const std::vector<double> rates(scores.size(), config.eta);
    const auto traj =
        eci_trajectory(scores, rates, 0.0, config.alpha, config.c, true);
    const auto n = static_cast<std::size_t>(theorem_window(config.alpha));

    ViolationReport report;
    if (traj.size() < n) return report;
    std::size_t window_errs = 0;
    for (std::size_t t = 0; t < traj.size(); ++t) {
        window_errs += static_cast<std::size_t>(traj[t].err);
        if (t >= n) {
            window_errs -= static_cast<std::size_t>(traj[t - n].err);
        }
        if (t + 1 >= n && window_errs >= 2) {
            report.violations.push_back(
                {t + 1 - n, static_cast<double>(window_errs), 1.0,
                 "miscoverage window"});
        }
    }
    return report;
}

ViolationReport check_proposition1(std::span<const double> scores,
                                   std::span<const double> rates,
                                   double q_init, double alpha, double c,
                                   double score_bound, double lambda) {
    lambda = effective_lambda(lambda);
    const auto traj = eci_trajectory(scores, rates, q_init, alpha, c, false);
    ViolationReport report;
    double max_rate = 0.0;   // M_{t-1}, M_0 = 0
    for (std::size_t t = 0; t < traj.size(); ++t) {
        const double low = -(alpha + lambda) * max_rate;
        const double high =
            score_bound + (1.0 - alpha + lambda) * max_rate;
        const double q = traj[t].q_before;
        if (q < low - 1e-12 || q > high + 1e-12) {
            report.violations.push_back({t, q, q < low ? low : high,
                                         "threshold outside proposition-1 "
                                         "bounds"});
        }
        max_rate = std::max(max_rate, traj[t].rate);
    }
    return report;
}

ViolationReport check_proposition2(std::span<const double> scores,
                                   std::span<const double> rates,
                                   double q_init, double alpha, double c,
                                   double score_bound, double lambda) {
    lambda = effective_lambda(lambda);
    const SmoothingKernel kernel{c};
    const auto traj = eci_trajectory(scores, rates, q_init, alpha, c, false);
    ViolationReport report;
    double max_rate = 0.0;
    for (std::size_t t = 0; t < traj.size(); ++t) {
        const double bound =
            c * (score_bound + (1.0 - alpha + lambda) * max_rate);
        const double value =
            std::abs(eq_term(kernel, traj[t].score - traj[t].q_before));
        if (value > bound + 1e-12) {
            report.violations.push_back(
                {t, value, bound, "EQ term outside proposition-2 bound"});
        }
        max_rate = std::max(max_rate, traj[t].rate);
    }
    return report;
}

Theorem2Result check_theorem2(std::span<const double> scores,
                              std::span<const double> rates, double alpha,
                              double c, double score_bound, double lambda) {
    lambda = effective_lambda(lambda);
    const auto traj = eci_trajectory(scores, rates, 0.0, alpha, c, false);
    const auto T = static_cast<double>(traj.size());

    double err_sum = 0.0;
    for (const auto& step : traj) {
        err_sum += step.err - alpha;
    }
    double delta_l1 = std::abs(1.0 / rates[0]);
    for (std::size_t t = 1; t < rates.size(); ++t) {
        delta_l1 += std::abs(1.0 / rates[t] - 1.0 / rates[t - 1]);
    }
    double max_rate_before_last = 0.0;   // M_{T-1}
    for (std::size_t t = 0; t + 1 < rates.size(); ++t) {
        max_rate_before_last = std::max(max_rate_before_last, rates[t]);
    }
    Theorem2Result result;
    result.lhs = std::abs(err_sum / T);
    result.rhs =
        (score_bound + max_rate_before_last) * delta_l1 / T +
        c * (score_bound + (1.0 - alpha + lambda) * max_rate_before_last);
    result.holds = result.lhs <= result.rhs;
    return result;
}

namespace {

double open_uniform(std::mt19937_64& gen) {
    return (static_cast<double>(gen() >> 11) + 0.5) * 0x1p-53;
}

std::vector<double> uniform_scores(std::mt19937_64& gen, long n, double b) {
    std::vector<double> out(static_cast<std::size_t>(n));
    for (double& v : out) v = b * open_uniform(gen);
    return out;
}

} // namespace

BatteryResult run_battery(const BatteryConfig& config) {
    BatteryResult result;
    auto has = [&](const char* name) {
        return std::find(config.checks.begin(), config.checks.end(), name) !=
               config.checks.end();
    };
    for (const auto& check : config.checks) {
        if (check != "theorem1" && check != "proposition1" &&
            check != "proposition2" && check != "theorem2") {
            throw ConfigError("unknown check: " + check);
        }
    }

    if (has("theorem1")) {
        std::size_t bad = 0;
        for (int s = 0; s < config.theorem1_seeds; ++s) {
            std::mt19937_64 gen(config.seed + static_cast<std::uint64_t>(s));
            const auto scores = uniform_scores(gen, config.theorem1.horizon,
                                               config.theorem1.score_bound);
            bad += check_theorem1(config.theorem1, scores).violations.size();
        }
        result.total_violations += bad;
        result.lines.push_back(strfmt(
            "theorem1: %d seeds x T=%ld, %zu violating windows",
            config.theorem1_seeds, config.theorem1.horizon, bad));
    }

    if (has("proposition1") || has("proposition2")) {
        std::size_t bad1 = 0, bad2 = 0;
        for (int s = 0; s < config.proposition_seeds; ++s) {
            std::mt19937_64 gen(config.seed ^ (0x9e3779b9ULL + s));
            const auto scores = uniform_scores(gen, config.proposition_horizon,
                                               config.score_bound);
            std::vector<double> rates(scores.size());
            for (double& r : rates) {
                r = config.proposition_eta_max * open_uniform(gen);
            }
            const double q_init = config.score_bound * open_uniform(gen);
            if (has("proposition1")) {
                bad1 += check_proposition1(scores, rates, q_init, config.alpha,
                                           config.c, config.score_bound, 0.0)
                            .violations.size();
            }
            if (has("proposition2")) {
                bad2 += check_proposition2(scores, rates, q_init, config.alpha,
                                           config.c, config.score_bound, 0.0)
                            .violations.size();
            }
        }
        if (has("proposition1")) {
            result.total_violations += bad1;
            result.lines.push_back(strfmt(
                "proposition1: %d seeds x T=%ld, %zu bound violations",
                config.proposition_seeds, config.proposition_horizon, bad1));
        }
        if (has("proposition2")) {
            result.total_violations += bad2;
            result.lines.push_back(strfmt(
                "proposition2: %d seeds x T=%ld, %zu bound violations",
                config.proposition_seeds, config.proposition_horizon, bad2));
        }
    }

    if (has("theorem2")) {
        std::size_t bad = 0;
        for (int s = 0; s < config.theorem2_schedules; ++s) {
            std::mt19937_64 gen(config.seed ^ (0xc2b2ae3d27d4eb4fULL + s));
            const auto scores = uniform_scores(gen, config.theorem2_horizon,
                                               config.score_bound);
            // Piecewise-constant rate schedule with 1..10 segments.
            const int segments = 1 + static_cast<int>(gen() % 10);
            std::vector<double> rates;
            rates.reserve(scores.size());
            const std::size_t seg_len =
                scores.size() / static_cast<std::size_t>(segments) + 1;
            while (rates.size() < scores.size()) {
                const double r = 0.01 + 4.99 * open_uniform(gen);
                for (std::size_t i = 0;
                     i < seg_len && rates.size() < scores.size(); ++i) {
                    rates.push_back(r);
                }
            }
            const auto res = check_theorem2(scores, rates, config.alpha,
                                            config.c, config.score_bound, 0.0);
            if (!res.holds) ++bad;
        }
        result.total_violations += bad;
        result.lines.push_back(strfmt(
            "theorem2: %d schedules x T=%ld, %zu bound failures",
            config.theorem2_schedules, config.theorem2_horizon, bad));
    }
    return result;
}

} // namespace eci
