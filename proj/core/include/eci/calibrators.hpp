#pragma once

#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include "eci/smoothing.hpp"

namespace eci {

enum class CalibratorKind {
    OGD,
    ACI,
    SF_OGD,
    DECAY_OGD,
    PID,
    FULL_SMOOTHED,
    INDICATOR_SMOOTHED,
    ECI,
    ECI_CUTOFF,
    ECI_INTEGRAL,
};

std::string to_string(CalibratorKind kind);
CalibratorKind calibrator_kind_from_string(const std::string& name);

/// Record of one calibrator step. err is the true miscoverage indicator
/// 1{score > threshold_before}, strict, for every rule (including the
/// smoothed ones, whose update uses f instead).
struct StepFeedback {
    int err = 0;
    double score = 0.0;
    double threshold_before = 0.0;
    double threshold_after = 0.0;
    double eta_used = 0.0;
};

/// Shared state for the threshold-space rules (OGD, decay-OGD, ECI,
/// ECI-cutoff, fully/indicator smoothed).
struct ThresholdState {
    double q = 0.0;
    long t = 1;
    double alpha = 0.1;
};

struct AciState {
    double alpha_t = 0.1;              // may leave (0,1)
    double alpha = 0.1;                // nominal level
    double eta = 0.005;
    std::vector<double> history;       // kept sorted ascending
};

struct SfOgdState {
    double q = 0.0;
    double grad_sq_sum = 0.0;
    double alpha = 0.1;
};

struct IntegralState {
    double q = 0.0;
    double weighted_sum = 0.0;         // U_t = gamma*U_{t-1} + g_t
    double weight_norm = 0.0;          // Z_t = gamma*Z_{t-1} + 1
    double gamma = 0.95;
    long t = 1;
    double alpha = 0.1;
};

struct PidState {
    double q = 0.0;
    double err_sum = 0.0;              // running sum of (err_i - alpha)
    long t = 1;
    double alpha = 0.1;
    double k_i = 1.0;                  // integrator gain
    double c_sat = 0.0;                // <= 0: auto, 2x trailing score range
    bool linear_integrator = false;    // k_i * err_sum / t instead of tan
    bool theta_scorecaster = false;    // Theta over the trailing score window
    int window = 100;
    std::deque<double> score_window;   // trailing raw scores, newest last
};

// Single-step update rules. Each advances the state in place and reports
// the step. err tie-break is strict: score == threshold counts as coverage.

StepFeedback ogd_update(ThresholdState& state, double s, double eta);

StepFeedback eci_update(ThresholdState& state, double s, double eta,
                        const SmoothingKernel& kernel);

StepFeedback eci_cutoff_update(ThresholdState& state, double s, double eta,
                               const SmoothingKernel& kernel, double h_t);

StepFeedback eci_integral_update(IntegralState& state, double s, double eta,
                                 const SmoothingKernel& kernel);

StepFeedback aci_update(AciState& state, double s);

StepFeedback sf_ogd_update(SfOgdState& state, double s, double eta_base);

/// eta_t = eta_base * t^(-1/2 - epsilon), epsilon = 0.1.
StepFeedback decay_ogd_update(ThresholdState& state, double s,
                              double eta_base, double epsilon = 0.1);

StepFeedback pid_update(PidState& state, double s, double eta_t);

StepFeedback full_smoothed_update(ThresholdState& state, double s, double eta,
                                  const SmoothingKernel& kernel);

StepFeedback indicator_smoothed_update(ThresholdState& state, double s,
                                       double eta,
                                       const SmoothingKernel& kernel);

/// Current ACI threshold: the ceil((1-alpha_t)*n)-th order statistic of
/// the history, +inf when 1-alpha_t > 1 or the history is empty, -inf
/// when 1-alpha_t <= 0.
double aci_threshold(const AciState& state);

/// Empirical quantile with the same order-statistic convention on an
/// arbitrary score set.
double empirical_quantile(std::vector<double> scores, double p);

/// Hyperparameters for the polymorphic calibrator used by the runner.
struct CalibratorParams {
    double alpha = 0.1;
    double eta_base = 0.05;
    SmoothingKernel kernel{1.0};
    double gamma = 0.95;
    double decay_epsilon = 0.1;
    double pid_k_i = 1.0;
    double pid_c_sat = 0.0;
    bool pid_linear_integrator = false;
    bool pid_theta_scorecaster = false;
    int window = 100;
    double q_init = 0.0;
};

/// One online threshold sequence. Owns the per-method state; strictly
/// sequential, one instance per run side.
class Calibrator {
public:
    Calibrator(CalibratorKind kind, const CalibratorParams& params);

    CalibratorKind kind() const { return kind_; }

    /// Threshold the next score is compared against; +-inf possible (ACI).
    double threshold() const;

    /// Consume one score. eta_t is the per-step rate chosen by the caller
    /// (SF-OGD and decay-OGD apply their own schedule to params.eta_base
    /// and ignore it); h_t is read by ECI-cutoff only.
    StepFeedback step(double score, double eta_t, double h_t = 0.0);

    /// q <- max(q, floor). Theorem-mode switch; no-op for ACI.
    void clamp_floor(double floor);

private:
    CalibratorKind kind_;
    CalibratorParams params_;
    ThresholdState threshold_state_;
    AciState aci_state_;
    SfOgdState sf_state_;
    IntegralState integral_state_;
    PidState pid_state_;
};

} // namespace eci
