#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eci/calibrators.hpp"
#include "eci/forecasters.hpp"

namespace eci {

/// Hyperparameters of one threshold-update method at the run level.
/// alpha is the overall nominal level; two-sided runs calibrate each side
/// at alpha/2.
struct MethodParams {
    double alpha = 0.1;
    double eta = 0.05;
    double c = 1.0;          // sigmoid scale
    double h = 1.0;          // cutoff scale for ECI-cutoff
    double gamma = 0.95;     // ECI-integral decay
    int window = 100;        // w for adaptive eta_t / h_t
    double pid_k_i = 1.0;
    double pid_c_sat = 0.0;
    bool pid_linear_integrator = false;
    bool pid_theta_scorecaster = false;
    double decay_epsilon = 0.1;
    // Default: adaptive rates for PID and the smoothed/ECI family, fixed
    // rates for OGD/ACI/SF-OGD/decay-OGD.
    std::optional<bool> adaptive_rate;
};

bool uses_adaptive_rate(CalibratorKind kind, const MethodParams& params);

struct RunConfig {
    CalibratorKind method = CalibratorKind::ECI;
    MethodParams params;
    ForecasterConfig forecaster;
    int rolling_window = 50;
    double train_fraction = 0.0;
    bool symmetric = false;       // single calibrator on |y - yhat|
    bool clamp_at_zero = false;   // theorem-mode floor
    std::uint64_t seed = 0;
};

struct StepRecord {
    std::size_t t = 0;            // absolute index into the series
    double y = 0.0;
    double yhat = 0.0;
    double s_upper = 0.0;         // y - yhat
    double s_lower = 0.0;         // yhat - y
    double q_upper = 0.0;         // thresholds before the update
    double q_lower = 0.0;
    int err_upper = 0;
    int err_lower = 0;
    bool covered = false;
    double width = 0.0;           // q_lower + q_upper, +inf absorbs
    double eta_upper = 0.0;
    double eta_lower = 0.0;
};

struct RunTrace {
    std::vector<StepRecord> steps;
    double alpha = 0.1;
    bool symmetric = false;
};

struct Metrics {
    double coverage = 0.0;
    double avg_width = 0.0;
    double median_width = 0.0;
    double long_run_gap = 0.0;
    std::vector<double> rolling_coverage;
};

/// eta_t = eta_base * (max - min) over the trailing window; falls back to
/// eta_base when the range is zero so the calibrator never freezes.
double adaptive_rate(std::span<const double> score_window, double eta_base);

/// h_t = h_base * (max - min) over the trailing window (no fallback).
double adaptive_cutoff(std::span<const double> score_window, double h_base);

/// Interval width on the extended real line: +inf absorbs.
double interval_width(double q_lower, double q_upper);

/// The online loop over a recorded series: forecast, emit interval,
/// observe, update both side calibrators at level alpha/2 (or one
/// calibrator at level alpha in symmetric mode).
RunTrace run_online(const std::vector<double>& series, const RunConfig& config);

/// Drive a single calibrator over a raw score stream (theorem-mode runs
/// and score-level simulations). Per-step rates follow the method's
/// adaptive policy unless fixed_eta is set.
std::vector<StepFeedback> run_score_stream(std::span<const double> scores,
                                           CalibratorKind kind,
                                           const MethodParams& params,
                                           bool clamp_at_zero = false);

Metrics coverage_metrics(const RunTrace& trace, int rolling_window);

/// Per-step trace CSV: t,y,yhat,lower,upper,covered,width,eta_t with the
/// literal "inf" for infinite bounds.
void write_trace_csv(const RunTrace& trace, const std::string& path);

} // namespace eci
