#pragma once

#include <span>
#include <string>
#include <vector>

namespace eci {

enum class ForecasterKind { AR, THETA, NAIVE };

std::string to_string(ForecasterKind kind);
ForecasterKind forecaster_kind_from_string(const std::string& name);

struct ForecasterConfig {
    ForecasterKind kind = ForecasterKind::AR;
    int ar_order = 3;
    int min_history = 50;
    int refit_every = 1;
    bool include_intercept = true;
};

/// One-step-ahead AR(p) forecast: least squares of y_t on its p lags over
/// the full history, ridge jitter 1e-8 on the normal-equation diagonal.
double ar_fit_predict(std::span<const double> history,
                      const ForecasterConfig& config);

/// Fitted AR coefficients, intercept first when configured.
std::vector<double> ar_fit(std::span<const double> history,
                           const ForecasterConfig& config);

/// One-step-ahead Theta forecast: equal-weight combination of the fitted
/// linear trend extrapolated one step and the theta=2 line forecast by
/// simple exponential smoothing (grid-tuned smoothing parameter).
double theta_fit_predict(std::span<const double> history,
                         const ForecasterConfig& config);

/// Last observed value.
double naive_predict(std::span<const double> history);

/// Dispatching forecaster with incremental AR refits for the online loop.
/// predict() must be called with histories that only ever grow at the end.
class Forecaster {
public:
    explicit Forecaster(const ForecasterConfig& config);

    int min_history() const;

    double predict(const std::vector<double>& history);

private:
    ForecasterConfig config_;
    // AR incremental normal equations over rows seen so far.
    std::vector<double> gram_;      // (p+k)x(p+k), row-major
    std::vector<double> moment_;    // (p+k)
    std::size_t rows_consumed_ = 0;
    std::vector<double> coeffs_;
    long last_fit_step_ = -1;
    long steps_seen_ = 0;
};

} // namespace eci
