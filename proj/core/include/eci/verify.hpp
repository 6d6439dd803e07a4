#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace eci {

/// Configuration for the fixed-rate coverage check. N = floor(1/alpha);
/// the hypotheses eta > 2NB and c < min{eta, N^2} / (2N^2 [B + (1-alpha
/// +lambda) eta]) are validated at construction time.
struct TheoremConfig {
    double score_bound = 1.0;     // B
    double alpha = 0.1;
    double eta = 21.0;
    double c = 0.0;               // <= 0: auto, 0.9x the admissible limit
    double lambda = 0.0;          // <= 0: auto, the analytic 1/e bound
    long horizon = 100000;        // T
    std::uint64_t seed = 0;
};

int theorem_window(double alpha);                 // N
double theorem1_c_limit(const TheoremConfig& config);

/// Fills auto fields and throws HypothesisViolated if the premises fail.
TheoremConfig validate_theorem1(TheoremConfig config);

struct Violation {
    std::size_t index = 0;
    double value = 0.0;
    double bound = 0.0;
    std::string what;
};

struct ViolationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

/// ECI with fixed rate and threshold clamped at 0; reports every window
/// of N consecutive steps containing two or more miscoverages.
ViolationReport check_theorem1(const TheoremConfig& config,
                               std::span<const double> scores);

/// Threshold bounds under arbitrary nonnegative per-step rates:
/// -(alpha+lambda) M_{t-1} <= q_t <= B + (1-alpha+lambda) M_{t-1}.
ViolationReport check_proposition1(std::span<const double> scores,
                                   std::span<const double> rates,
                                   double q_init, double alpha, double c,
                                   double score_bound, double lambda);

/// EQ-term bound along the same trajectory:
/// |eq(s_t - q_t)| <= c [B + (1-alpha+lambda) M_{t-1}].
ViolationReport check_proposition2(std::span<const double> scores,
                                   std::span<const double> rates,
                                   double q_init, double alpha, double c,
                                   double score_bound, double lambda);

struct Theorem2Result {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

/// Averaged miscoverage bound for an arbitrary positive rate sequence.
Theorem2Result check_theorem2(std::span<const double> scores,
                              std::span<const double> rates, double alpha,
                              double c, double score_bound, double lambda);

/// Seeded verification battery. Checks outside the default set are a
/// config error; an empty set is rejected by the caller.
struct BatteryConfig {
    std::vector<std::string> checks = {"theorem1", "proposition1",
                                       "proposition2", "theorem2"};
    TheoremConfig theorem1;
    int theorem1_seeds = 10;
    int proposition_seeds = 100;
    long proposition_horizon = 10000;
    double proposition_eta_max = 5.0;
    int theorem2_schedules = 100;
    long theorem2_horizon = 10000;
    std::uint64_t seed = 20240915;
    double alpha = 0.1;
    double c = 1.0;
    double score_bound = 1.0;
};

struct BatteryResult {
    std::size_t total_violations = 0;
    std::vector<std::string> lines;   // one summary line per check
};

BatteryResult run_battery(const BatteryConfig& config);

} // namespace eci
