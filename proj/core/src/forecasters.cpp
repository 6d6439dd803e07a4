#include "eci/forecasters.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>

#include "eci/errors.hpp"

namespace eci {

std::string to_string(ForecasterKind kind) {
    switch (kind) {
    case ForecasterKind::AR: return "ar";
    case ForecasterKind::THETA: return "theta";
    case ForecasterKind::NAIVE: return "naive";
    }
    return "?";
}

ForecasterKind forecaster_kind_from_string(const std::string& name) {
    if (name == "ar") return ForecasterKind::AR;
    if (name == "theta") return ForecasterKind::THETA;
    if (name == "naive") return ForecasterKind::NAIVE;
    throw ConfigError("unknown forecaster: " + name);
}

namespace {

// Gaussian elimination with partial pivoting; dimensions stay tiny (p+1).
std::vector<double> solve_dense(std::vector<double> a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a[r * n + col]) > std::abs(a[pivot * n + col])) {
                pivot = r;
            }
        }
        if (pivot != col) {
            for (std::size_t k = 0; k < n; ++k) {
                std::swap(a[col * n + k], a[pivot * n + k]);
            }
            std::swap(b[col], b[pivot]);
        }
        const double d = a[col * n + col];
        for (std::size_t r = col + 1; r < n; ++r) {
            const double m = a[r * n + col] / d;
            if (m == 0.0) continue;
            for (std::size_t k = col; k < n; ++k) {
                a[r * n + k] -= m * a[col * n + k];
            }
            b[r] -= m * b[col];
        }
    }
    std::vector<double> x(n, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t k = i + 1; k < n; ++k) {
            s -= a[i * n + k] * x[k];
        }
        x[i] = s / a[i * n + i];
    }
    return x;
}

constexpr double kRidge = 1e-8;

void ar_accumulate_row(std::span<const double> y, std::size_t i, int p,
                       bool intercept, std::vector<double>& gram,
                       std::vector<double>& moment) {
    const std::size_t dim = static_cast<std::size_t>(p) + (intercept ? 1 : 0);
    std::vector<double> row(dim);
    std::size_t k = 0;
    if (intercept) row[k++] = 1.0;
    for (int lag = 1; lag <= p; ++lag) {
        row[k++] = y[i - static_cast<std::size_t>(lag)];
    }
    for (std::size_t r = 0; r < dim; ++r) {
        moment[r] += row[r] * y[i];
        for (std::size_t c = 0; c < dim; ++c) {
            gram[r * dim + c] += row[r] * row[c];
        }
    }
}

std::vector<double> ar_solve(std::vector<double> gram,
                             const std::vector<double>& moment) {
    const std::size_t dim = moment.size();
    for (std::size_t d = 0; d < dim; ++d) {
        gram[d * dim + d] += kRidge;
    }
    return solve_dense(std::move(gram), moment);
}

double ar_forecast_from(std::span<const double> y,
                        const std::vector<double>& coeffs, int p,
                        bool intercept) {
    double out = 0.0;
    std::size_t k = 0;
    if (intercept) out = coeffs[k++];
    for (int lag = 1; lag <= p; ++lag) {
        out += coeffs[k++] * y[y.size() - static_cast<std::size_t>(lag)];
    }
    return out;
}

struct ThetaFit {
    double intercept = 0.0;
    double slope = 0.0;
    double ses_alpha = 0.0;
    double ses_level = 0.0;   // smoothed level of the detrended theta=2 line
};

// Fit the trend line, then SES over the detrended theta=2 line
// z_t - (a + b t) = 2 (y_t - (a + b t)), tuning the smoothing parameter
// on the grid {0.05, ..., 0.95} by in-sample one-step squared error.
// The theta=2 forecast is trend(n) + level, so an exactly linear series
// is extrapolated exactly.
ThetaFit theta_fit(std::span<const double> y) {
    const std::size_t n = y.size();
    double mean_t = 0.0, mean_y = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mean_t += static_cast<double>(i);
        mean_y += y[i];
    }
    mean_t /= static_cast<double>(n);
    mean_y /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dt = static_cast<double>(i) - mean_t;
        sxx += dt * dt;
        sxy += dt * (y[i] - mean_y);
    }
    ThetaFit fit;
    fit.slope = (sxx > 0.0) ? sxy / sxx : 0.0;
    fit.intercept = mean_y - fit.slope * mean_t;

    std::vector<double> detrended(n);
    for (std::size_t i = 0; i < n; ++i) {
        detrended[i] =
            2.0 * (y[i] - (fit.intercept + fit.slope * static_cast<double>(i)));
    }

    double best_sse = std::numeric_limits<double>::infinity();
    for (int step = 1; step <= 19; ++step) {
        const double a = 0.05 * step;
        double level = detrended[0];
        double sse = 0.0;
        for (std::size_t i = 1; i < n; ++i) {
            const double e = detrended[i] - level;
            sse += e * e;
            level += a * e;
        }
        if (sse < best_sse) {
            best_sse = sse;
            fit.ses_alpha = a;
            fit.ses_level = level;
        }
    }
    return fit;
}

double theta_forecast_from(const ThetaFit& fit, std::size_t n) {
    const double trend_next = fit.intercept + fit.slope * static_cast<double>(n);
    const double ses_next = trend_next + fit.ses_level;
    return 0.5 * (trend_next + ses_next);
}

void require_history(std::span<const double> history,
                     const ForecasterConfig& config) {
    if (history.size() < static_cast<std::size_t>(config.min_history)) {
        throw InsufficientHistory("history length " +
                                  std::to_string(history.size()) +
                                  " < min_history " +
                                  std::to_string(config.min_history));
    }
}

} // namespace

std::vector<double> ar_fit(std::span<const double> history,
                           const ForecasterConfig& config) {
    require_history(history, config);
    const int p = config.ar_order;
    const std::size_t dim =
        static_cast<std::size_t>(p) + (config.include_intercept ? 1 : 0);
    std::vector<double> gram(dim * dim, 0.0);
    std::vector<double> moment(dim, 0.0);
    for (std::size_t i = static_cast<std::size_t>(p); i < history.size(); ++i) {
        ar_accumulate_row(history, i, p, config.include_intercept, gram,
                          moment);
    }
    return ar_solve(std::move(gram), moment);
}

double ar_fit_predict(std::span<const double> history,
                      const ForecasterConfig& config) {
    const auto coeffs = ar_fit(history, config);
    return ar_forecast_from(history, coeffs, config.ar_order,
                            config.include_intercept);
}

double theta_fit_predict(std::span<const double> history,
                         const ForecasterConfig& config) {
    require_history(history, config);
    return theta_forecast_from(theta_fit(history), history.size());
}

double naive_predict(std::span<const double> history) {
    if (history.empty()) {
        throw EmptyHistory("naive_predict on empty history");
    }
    return history.back();
}

Forecaster::Forecaster(const ForecasterConfig& config) : config_(config) {
    if (config_.ar_order < 1) throw ConfigError("ar_order must be >= 1");
    if (config_.min_history <= config_.ar_order + 2) {
        throw ConfigError("min_history must exceed ar_order + 2");
    }
    if (config_.refit_every < 1) throw ConfigError("refit_every must be >= 1");
    const std::size_t dim = static_cast<std::size_t>(config_.ar_order) +
                            (config_.include_intercept ? 1 : 0);
    gram_.assign(dim * dim, 0.0);
    moment_.assign(dim, 0.0);
}

int Forecaster::min_history() const {
    return config_.kind == ForecasterKind::NAIVE ? 1 : config_.min_history;
}

double Forecaster::predict(const std::vector<double>& history) {
    ++steps_seen_;
    switch (config_.kind) {
    case ForecasterKind::NAIVE:
        return naive_predict(history);
    case ForecasterKind::THETA:
        return theta_fit_predict(history, config_);
    case ForecasterKind::AR:
        break;
    }
    require_history(history, config_);
    const int p = config_.ar_order;
    // Fold in rows the expanding history has grown since last call.
    const std::size_t first = std::max(rows_consumed_,
                                       static_cast<std::size_t>(p));
    for (std::size_t i = first; i < history.size(); ++i) {
        ar_accumulate_row(history, i, p, config_.include_intercept, gram_,
                          moment_);
    }
    rows_consumed_ = std::max(rows_consumed_, history.size());
    if (coeffs_.empty() ||
        steps_seen_ - last_fit_step_ >= config_.refit_every) {
        coeffs_ = ar_solve(gram_, moment_);
        last_fit_step_ = steps_seen_;
    }
    return ar_forecast_from(history, coeffs_, p, config_.include_intercept);
}

} // namespace eci
