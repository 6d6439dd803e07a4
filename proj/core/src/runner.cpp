#include "eci/runner.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <limits>

#include "eci/errors.hpp"
#include "eci/text.hpp"

namespace eci {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

CalibratorParams to_calibrator_params(const MethodParams& p, double level) {
    CalibratorParams out;
    out.alpha = level;
    out.eta_base = p.eta;
    out.kernel = SmoothingKernel{p.c};
    out.gamma = p.gamma;
    out.decay_epsilon = p.decay_epsilon;
    out.pid_k_i = p.pid_k_i;
    out.pid_c_sat = p.pid_c_sat;
    out.pid_linear_integrator = p.pid_linear_integrator;
    out.pid_theta_scorecaster = p.pid_theta_scorecaster;
    out.window = p.window;
    out.q_init = 0.0;
    return out;
}

// One side of a run: a calibrator plus its own trailing score window.
class Side {
public:
    Side(CalibratorKind kind, const MethodParams& params, double level)
        : calibrator_(kind, to_calibrator_params(params, level)),
          adaptive_(uses_adaptive_rate(kind, params)),
          eta_base_(params.eta), h_base_(params.h), window_(params.window) {}

    double threshold() const { return calibrator_.threshold(); }

    StepFeedback observe(double score, bool clamp_at_zero) {
        window_scores_.push_back(score);
        while (window_scores_.size() > static_cast<std::size_t>(window_)) {
            window_scores_.pop_front();
        }
        const std::vector<double> w(window_scores_.begin(),
                                    window_scores_.end());
        const double eta_t = adaptive_ ? adaptive_rate(w, eta_base_)
                                       : eta_base_;
        const double h_t = adaptive_cutoff(w, h_base_);
        auto fb = calibrator_.step(score, eta_t, h_t);
        if (clamp_at_zero) {
            calibrator_.clamp_floor(0.0);
        }
        return fb;
    }

private:
    Calibrator calibrator_;
    bool adaptive_;
    double eta_base_;
    double h_base_;
    int window_;
    std::deque<double> window_scores_;
};

} // namespace

bool uses_adaptive_rate(CalibratorKind kind, const MethodParams& params) {
    if (params.adaptive_rate.has_value()) {
        return *params.adaptive_rate;
    }
    switch (kind) {
    case CalibratorKind::PID:
    case CalibratorKind::ECI:
    case CalibratorKind::ECI_CUTOFF:
    case CalibratorKind::ECI_INTEGRAL:
    case CalibratorKind::FULL_SMOOTHED:
    case CalibratorKind::INDICATOR_SMOOTHED:
        return true;
    default:
        return false;
    }
}

double adaptive_rate(std::span<const double> score_window, double eta_base) {
    if (score_window.empty()) return eta_base;
    const auto [lo, hi] =
        std::minmax_element(score_window.begin(), score_window.end());
    const double range = *hi - *lo;
    return range > 0.0 ? eta_base * range : eta_base;
}

double adaptive_cutoff(std::span<const double> score_window, double h_base) {
    if (score_window.empty()) return 0.0;
    const auto [lo, hi] =
        std::minmax_element(score_window.begin(), score_window.end());
    return h_base * (*hi - *lo);
}

double interval_width(double q_lower, double q_upper) {
    if (q_lower == kInf || q_upper == kInf) return kInf;
    return q_lower + q_upper;
}

RunTrace run_online(const std::vector<double>& series,
                    const RunConfig& config) {
    if (config.params.alpha <= 0.0 || config.params.alpha >= 1.0) {
        throw ConfigError("alpha must lie in (0,1)");
    }
    Forecaster forecaster(config.forecaster);
    const std::size_t n = series.size();
    const auto train = static_cast<std::size_t>(
        config.train_fraction * static_cast<double>(n));
    const std::size_t warmup =
        std::max<std::size_t>(train,
                              static_cast<std::size_t>(forecaster.min_history()));
    if (warmup >= n) {
        throw InsufficientHistory("series too short for forecaster warm-up");
    }

    const double side_level =
        config.symmetric ? config.params.alpha : config.params.alpha / 2.0;
    Side upper(config.method, config.params, side_level);
    std::optional<Side> lower;
    if (!config.symmetric) {
        lower.emplace(config.method, config.params, side_level);
    }

    RunTrace trace;
    trace.alpha = config.params.alpha;
    trace.symmetric = config.symmetric;
    std::vector<double> history(series.begin(),
                                series.begin() + static_cast<long>(warmup));

    for (std::size_t t = warmup; t < n; ++t) {
        const double y = series[t];
        if (!std::isfinite(y)) {
            throw ConfigError("non-finite observation at step " +
                              std::to_string(t));
        }
        StepRecord rec;
        rec.t = t;
        rec.y = y;
        rec.yhat = forecaster.predict(history);
        rec.q_upper = upper.threshold();
        rec.q_lower = lower ? lower->threshold() : rec.q_upper;

        if (config.symmetric) {
            const double s = std::abs(y - rec.yhat);
            rec.s_upper = s;
            rec.s_lower = s;
            auto fb = upper.observe(s, config.clamp_at_zero);
            rec.err_upper = fb.err;
            rec.err_lower = fb.err;
            rec.eta_upper = fb.eta_used;
            rec.eta_lower = fb.eta_used;
            rec.covered = fb.err == 0;
            rec.width = interval_width(rec.q_upper, rec.q_upper);
        } else {
            rec.s_upper = y - rec.yhat;
            rec.s_lower = rec.yhat - y;
            auto fb_u = upper.observe(rec.s_upper, config.clamp_at_zero);
            auto fb_l = lower->observe(rec.s_lower, config.clamp_at_zero);
            rec.err_upper = fb_u.err;
            rec.err_lower = fb_l.err;
            rec.eta_upper = fb_u.eta_used;
            rec.eta_lower = fb_l.eta_used;
            rec.covered = rec.err_upper == 0 && rec.err_lower == 0;
            rec.width = interval_width(rec.q_lower, rec.q_upper);
        }
        trace.steps.push_back(rec);
        history.push_back(y);
    }
    return trace;
}

std::vector<StepFeedback> run_score_stream(std::span<const double> scores,
                                           CalibratorKind kind,
                                           const MethodParams& params,
                                           bool clamp_at_zero) {
    Side side(kind, params, params.alpha);
    std::vector<StepFeedback> out;
    out.reserve(scores.size());
    for (double s : scores) {
        out.push_back(side.observe(s, clamp_at_zero));
    }
    return out;
}

Metrics coverage_metrics(const RunTrace& trace, int rolling_window) {
    if (trace.steps.empty()) {
        throw EmptyTrace("coverage_metrics on empty trace");
    }
    Metrics m;
    const std::size_t n = trace.steps.size();
    std::vector<double> widths;
    widths.reserve(n);
    double covered = 0.0;
    bool any_inf = false;
    double width_sum = 0.0;
    for (const auto& s : trace.steps) {
        covered += s.covered ? 1.0 : 0.0;
        widths.push_back(s.width);
        if (std::isinf(s.width)) {
            any_inf = true;
        } else {
            width_sum += s.width;
        }
    }
    m.coverage = covered / static_cast<double>(n);
    m.avg_width = any_inf ? kInf : width_sum / static_cast<double>(n);

    std::sort(widths.begin(), widths.end());
    const double lo = widths[(n - 1) / 2];
    const double hi = widths[n / 2];
    if (std::isinf(hi)) {
        m.median_width = std::isinf(lo) ? kInf : lo;
    } else {
        m.median_width = 0.5 * (lo + hi);
    }
    m.long_run_gap = std::abs(m.coverage - (1.0 - trace.alpha));

    m.rolling_coverage.reserve(n);
    double window_sum = 0.0;
    const auto w = static_cast<std::size_t>(std::max(rolling_window, 1));
    for (std::size_t i = 0; i < n; ++i) {
        window_sum += trace.steps[i].covered ? 1.0 : 0.0;
        if (i >= w) {
            window_sum -= trace.steps[i - w].covered ? 1.0 : 0.0;
        }
        const double denom = static_cast<double>(std::min(i + 1, w));
        m.rolling_coverage.push_back(window_sum / denom);
    }
    return m;
}

namespace {

std::string fmt_number(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return strfmt("%.17g", v);
}

} // namespace

void write_trace_csv(const RunTrace& trace, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw ConfigError("cannot write trace file: " + path);
    }
    out << "t,y,yhat,lower,upper,covered,width,eta_t\n";
    for (const auto& s : trace.steps) {
        const double lower_bound = s.yhat - s.q_lower;
        const double upper_bound = s.yhat + s.q_upper;
        out << s.t << ',' << fmt_number(s.y) << ',' << fmt_number(s.yhat)
            << ',' << fmt_number(lower_bound) << ',' << fmt_number(upper_bound)
            << ',' << (s.covered ? 1 : 0) << ',' << fmt_number(s.width) << ','
            << fmt_number(s.eta_upper) << '\n';
    }
}

} // namespace eci
