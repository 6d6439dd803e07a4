#include "eci/calibrators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "eci/errors.hpp"
#include "eci/forecasters.hpp"

namespace eci {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int miscoverage(double s, double q) { return s > q ? 1 : 0; }

} // namespace

std::string to_string(CalibratorKind kind) {
    switch (kind) {
    case CalibratorKind::OGD: return "ogd";
    case CalibratorKind::ACI: return "aci";
    case CalibratorKind::SF_OGD: return "sf-ogd";
    case CalibratorKind::DECAY_OGD: return "decay-ogd";
    case CalibratorKind::PID: return "pid";
    case CalibratorKind::FULL_SMOOTHED: return "full-smoothed";
    case CalibratorKind::INDICATOR_SMOOTHED: return "indicator-smoothed";
    case CalibratorKind::ECI: return "eci";
    case CalibratorKind::ECI_CUTOFF: return "eci-cutoff";
    case CalibratorKind::ECI_INTEGRAL: return "eci-integral";
    }
    return "?";
}

CalibratorKind calibrator_kind_from_string(const std::string& name) {
    if (name == "ogd") return CalibratorKind::OGD;
    if (name == "aci") return CalibratorKind::ACI;
    if (name == "sf-ogd") return CalibratorKind::SF_OGD;
    if (name == "decay-ogd") return CalibratorKind::DECAY_OGD;
    if (name == "pid") return CalibratorKind::PID;
    if (name == "full-smoothed") return CalibratorKind::FULL_SMOOTHED;
    if (name == "indicator-smoothed") return CalibratorKind::INDICATOR_SMOOTHED;
    if (name == "eci") return CalibratorKind::ECI;
    if (name == "eci-cutoff") return CalibratorKind::ECI_CUTOFF;
    if (name == "eci-integral") return CalibratorKind::ECI_INTEGRAL;
    throw ConfigError("unknown calibrator: " + name);
}

StepFeedback ogd_update(ThresholdState& state, double s, double eta) {
    StepFeedback fb;
    fb.score = s;
    fb.threshold_before = state.q;
    fb.err = miscoverage(s, state.q);
    fb.eta_used = eta;
    state.q += eta * (fb.err - state.alpha);
    state.t += 1;
    fb.threshold_after = state.q;
    return fb;
}

StepFeedback eci_update(ThresholdState& state, double s, double eta,
                        const SmoothingKernel& kernel) {
    StepFeedback fb;
    fb.score = s;
    fb.threshold_before = state.q;
    fb.err = miscoverage(s, state.q);
    fb.eta_used = eta;
    state.q += eta * (fb.err - state.alpha + eq_term(kernel, s - state.q));
    state.t += 1;
    fb.threshold_after = state.q;
    return fb;
}

StepFeedback eci_cutoff_update(ThresholdState& state, double s, double eta,
                               const SmoothingKernel& kernel, double h_t) {
    StepFeedback fb;
    fb.score = s;
    fb.threshold_before = state.q;
    fb.err = miscoverage(s, state.q);
    fb.eta_used = eta;
    state.q +=
        eta * (fb.err - state.alpha + eq_term_cutoff(kernel, s - state.q, h_t));
    state.t += 1;
    fb.threshold_after = state.q;
    return fb;
}

StepFeedback eci_integral_update(IntegralState& state, double s, double eta,
                                 const SmoothingKernel& kernel) {
    StepFeedback fb;
    fb.score = s;
    fb.threshold_before = state.q;
    fb.err = miscoverage(s, state.q);
    fb.eta_used = eta;
    const double g = fb.err - state.alpha + eq_term(kernel, s - state.q);
    state.weighted_sum = state.gamma * state.weighted_sum + g;
    state.weight_norm = state.gamma * state.weight_norm + 1.0;
    state.q += eta * (state.weighted_sum / state.weight_norm);
    state.t += 1;
    fb.threshold_after = state.q;
    return fb;
}

double aci_threshold(const AciState& state) {
    const double p = 1.0 - state.alpha_t;
    if (p > 1.0 || state.history.empty()) return kInf;
    if (p <= 0.0) return -kInf;
    const std::size_t n = state.history.size();
    auto k = static_cast<std::size_t>(
        std::ceil(p * static_cast<double>(n)));
    k = std::clamp<std::size_t>(k, 1, n);
    return state.history[k - 1];
}

double empirical_quantile(std::vector<double> scores, double p) {
    if (p > 1.0 || scores.empty()) return kInf;
    if (p <= 0.0) return -kInf;
    std::sort(scores.begin(), scores.end());
    const std::size_t n = scores.size();
    auto k = static_cast<std::size_t>(
        std::ceil(p * static_cast<double>(n)));
    k = std::clamp<std::size_t>(k, 1, n);
    return scores[k - 1];
}

StepFeedback aci_update(AciState& state, double s) {
    StepFeedback fb;
    fb.score = s;
    fb.threshold_before = aci_threshold(state);
    fb.err = miscoverage(s, fb.threshold_before);
    fb.eta_used = state.eta;
    state.alpha_t += state.eta * (state.alpha - fb.err);
    state.history.insert(
        std::upper_bound(state.history.begin(), state.history.end(), s), s);
    fb.threshold_after = aci_threshold(state);
    return fb;
}

StepFeedback sf_ogd_update(SfOgdState& state, double s, double eta_base) {
    StepFeedback fb;
    fb.score = s;
    fb.threshold_before = state.q;
    fb.err = miscoverage(s, state.q);
    // Pinball subgradient of rho_{1-alpha}(s - q) in q.
    const double g = fb.err ? -(1.0 - state.alpha) : state.alpha;
    state.grad_sq_sum += g * g;
    const double scale = eta_base / std::sqrt(state.grad_sq_sum);
    fb.eta_used = scale;
    state.q -= scale * g;
    fb.threshold_after = state.q;
    return fb;
}

StepFeedback decay_ogd_update(ThresholdState& state, double s,
                              double eta_base, double epsilon) {
    const double eta_t =
        eta_base * std::pow(static_cast<double>(state.t), -0.5 - epsilon);
    return ogd_update(state, s, eta_t);
}

namespace {

double pid_integrator(const PidState& state) {
    const double t1 = static_cast<double>(state.t) + 1.0;
    if (state.linear_integrator) {
        return state.k_i * state.err_sum / static_cast<double>(state.t);
    }
    double c_sat = state.c_sat;
    if (c_sat <= 0.0) {
        // Auto: twice the trailing score range, with a unit floor so the
        // saturation scale never collapses on constant stretches.
        double lo = kInf, hi = -kInf;
        for (double v : state.score_window) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        const double range = state.score_window.empty() ? 0.0 : hi - lo;
        c_sat = 2.0 * std::max(range, 1.0);
    }
    const double half_pi = std::numbers::pi / 2.0;
    const double arg = std::clamp(state.err_sum * std::log(t1) / (c_sat * t1),
                                  -half_pi + 0.01, half_pi - 0.01);
    return state.k_i * std::tan(arg);
}

double pid_scorecast(const PidState& state) {
    if (state.score_window.empty()) return state.q;
    if (state.theta_scorecaster &&
        state.score_window.size() >= 20) {
        std::vector<double> window(state.score_window.begin(),
                                   state.score_window.end());
        ForecasterConfig cfg;
        cfg.kind = ForecasterKind::THETA;
        cfg.min_history = 20;
        return theta_fit_predict(window, cfg);
    }
    std::vector<double> window(state.score_window.begin(),
                               state.score_window.end());
    return empirical_quantile(std::move(window), 1.0 - state.alpha);
}

} // namespace

StepFeedback pid_update(PidState& state, double s, double eta_t) {
    StepFeedback fb;
    fb.score = s;
    fb.threshold_before = state.q;
    fb.err = miscoverage(s, state.q);
    fb.eta_used = eta_t;
    state.err_sum += fb.err - state.alpha;
    state.score_window.push_back(s);
    while (state.score_window.size() > static_cast<std::size_t>(state.window)) {
        state.score_window.pop_front();
    }
    const double r_t = pid_integrator(state);
    const double scorecast = pid_scorecast(state);
    state.q = scorecast + eta_t * (fb.err - state.alpha) + r_t;
    state.t += 1;
    fb.threshold_after = state.q;
    return fb;
}

StepFeedback full_smoothed_update(ThresholdState& state, double s, double eta,
                                  const SmoothingKernel& kernel) {
    StepFeedback fb;
    fb.score = s;
    fb.threshold_before = state.q;
    fb.err = miscoverage(s, state.q);
    fb.eta_used = eta;
    const double x = s - state.q;
    state.q += eta * (sigmoid_value(kernel, x) - state.alpha +
                      eq_term(kernel, x));
    state.t += 1;
    fb.threshold_after = state.q;
    return fb;
}

StepFeedback indicator_smoothed_update(ThresholdState& state, double s,
                                       double eta,
                                       const SmoothingKernel& kernel) {
    StepFeedback fb;
    fb.score = s;
    fb.threshold_before = state.q;
    fb.err = miscoverage(s, state.q);
    fb.eta_used = eta;
    state.q += eta * (sigmoid_value(kernel, s - state.q) - state.alpha);
    state.t += 1;
    fb.threshold_after = state.q;
    return fb;
}

Calibrator::Calibrator(CalibratorKind kind, const CalibratorParams& params)
    : kind_(kind), params_(params) {
    if (params.alpha <= 0.0 || params.alpha >= 1.0) {
        throw ConfigError("alpha must lie in (0,1)");
    }
    if (params.eta_base <= 0.0) {
        throw ConfigError("eta_base must be positive");
    }
    threshold_state_ = {params.q_init, 1, params.alpha};
    aci_state_.alpha = params.alpha;
    aci_state_.alpha_t = params.alpha;
    aci_state_.eta = params.eta_base;
    sf_state_ = {params.q_init, 0.0, params.alpha};
    integral_state_ = {params.q_init, 0.0, 0.0, params.gamma, 1, params.alpha};
    pid_state_.q = params.q_init;
    pid_state_.alpha = params.alpha;
    pid_state_.k_i = params.pid_k_i;
    pid_state_.c_sat = params.pid_c_sat;
    pid_state_.linear_integrator = params.pid_linear_integrator;
    pid_state_.theta_scorecaster = params.pid_theta_scorecaster;
    pid_state_.window = params.window;
}

double Calibrator::threshold() const {
    switch (kind_) {
    case CalibratorKind::ACI: return aci_threshold(aci_state_);
    case CalibratorKind::SF_OGD: return sf_state_.q;
    case CalibratorKind::PID: return pid_state_.q;
    case CalibratorKind::ECI_INTEGRAL: return integral_state_.q;
    default: return threshold_state_.q;
    }
}

StepFeedback Calibrator::step(double score, double eta_t, double h_t) {
    switch (kind_) {
    case CalibratorKind::OGD:
        return ogd_update(threshold_state_, score, eta_t);
    case CalibratorKind::ACI:
        return aci_update(aci_state_, score);
    case CalibratorKind::SF_OGD:
        return sf_ogd_update(sf_state_, score, params_.eta_base);
    case CalibratorKind::DECAY_OGD:
        return decay_ogd_update(threshold_state_, score, params_.eta_base,
                                params_.decay_epsilon);
    case CalibratorKind::PID:
        return pid_update(pid_state_, score, eta_t);
    case CalibratorKind::FULL_SMOOTHED:
        return full_smoothed_update(threshold_state_, score, eta_t,
                                    params_.kernel);
    case CalibratorKind::INDICATOR_SMOOTHED:
        return indicator_smoothed_update(threshold_state_, score, eta_t,
                                         params_.kernel);
    case CalibratorKind::ECI:
        return eci_update(threshold_state_, score, eta_t, params_.kernel);
    case CalibratorKind::ECI_CUTOFF:
        return eci_cutoff_update(threshold_state_, score, eta_t,
                                 params_.kernel, h_t);
    case CalibratorKind::ECI_INTEGRAL:
        return eci_integral_update(integral_state_, score, eta_t,
                                   params_.kernel);
    }
    throw ConfigError("unreachable calibrator kind");
}

void Calibrator::clamp_floor(double floor) {
    switch (kind_) {
    case CalibratorKind::ACI:
        break; // derived threshold, nothing to clamp
    case CalibratorKind::SF_OGD:
        sf_state_.q = std::max(sf_state_.q, floor);
        break;
    case CalibratorKind::PID:
        pid_state_.q = std::max(pid_state_.q, floor);
        break;
    case CalibratorKind::ECI_INTEGRAL:
        integral_state_.q = std::max(integral_state_.q, floor);
        break;
    default:
        threshold_state_.q = std::max(threshold_state_.q, floor);
        break;
    }
}

} // namespace eci
