#include <cmath>
#include <random>
#include <vector>

#include <doctest.h>

#include "eci/errors.hpp"
#include "eci/forecasters.hpp"

using namespace eci;

namespace {

std::vector<double> ar1_series(double phi, double y0, std::size_t n) {
    std::vector<double> y = {y0};
    while (y.size() < n) y.push_back(phi * y.back());
    return y;
}

} // namespace

TEST_CASE("ar on a constant series") {
    ForecasterConfig cfg;
    std::vector<double> y(80, 5.0);
    CHECK(ar_fit_predict(y, cfg) == doctest::Approx(5.0).epsilon(1e-6));
}

TEST_CASE("ar recovers a noiseless ar(1)") {
    ForecasterConfig cfg;
    cfg.ar_order = 1;
    std::vector<double> y = ar1_series(0.9, 3.0, 60);
    const double forecast = ar_fit_predict(y, cfg);
    CHECK(std::abs(forecast - 0.9 * y.back()) < 1e-6);
    const auto coeffs = ar_fit(y, cfg);
    CHECK(std::abs(coeffs[0]) < 1e-6);          // intercept ~ 0
    CHECK(std::abs(coeffs[1] - 0.9) < 1e-6);    // slope
}

TEST_CASE("ar recovers ar(3) coefficients on noiseless simulation") {
    // Characteristic roots e^{+-0.7i} and 0.95: a sustained oscillation
    // keeps the lag design well excited with no innovation noise.
    const double c = std::cos(0.7);
    const std::vector<double> phi = {0.95 + 2.0 * c, -(1.0 + 1.9 * c), 0.95};
    std::vector<double> y = {1.0, -0.7, 0.4};
    while (y.size() < 300) {
        const std::size_t n = y.size();
        y.push_back(phi[0] * y[n - 1] + phi[1] * y[n - 2] + phi[2] * y[n - 3]);
    }
    ForecasterConfig cfg;   // p = 3 with intercept
    const auto coeffs = ar_fit(y, cfg);
    CHECK(std::abs(coeffs[0]) < 1e-6);
    for (int i = 0; i < 3; ++i) {
        CHECK(std::abs(coeffs[i + 1] - phi[i]) < 1e-6);
    }
    const std::size_t n = y.size();
    const double expect =
        phi[0] * y[n - 1] + phi[1] * y[n - 2] + phi[2] * y[n - 3];
    CHECK(std::abs(ar_fit_predict(y, cfg) - expect) < 1e-6);
}

TEST_CASE("ar history precondition") {
    ForecasterConfig cfg;
    std::vector<double> y(cfg.min_history - 1, 1.0);
    CHECK_THROWS_AS(ar_fit_predict(y, cfg), InsufficientHistory);
}

TEST_CASE("theta on an exactly linear series") {
    ForecasterConfig cfg;
    std::vector<double> y;
    for (int t = 0; t < 100; ++t) y.push_back(2.0 + 3.0 * t);
    CHECK(theta_fit_predict(y, cfg) ==
          doctest::Approx(2.0 + 3.0 * 100).epsilon(1e-9));
}

TEST_CASE("theta on a constant series") {
    ForecasterConfig cfg;
    std::vector<double> y(60, 7.0);
    CHECK(theta_fit_predict(y, cfg) == doctest::Approx(7.0).epsilon(1e-9));
}

TEST_CASE("theta combination lies between its components") {
    // Linear plus a level step at the midpoint: trend extrapolation and
    // the SES component disagree, the combination must sit between them.
    ForecasterConfig cfg;
    std::vector<double> y;
    for (int t = 0; t < 100; ++t) {
        y.push_back(1.0 + 0.5 * t + (t >= 50 ? 10.0 : 0.0));
    }
    const std::size_t n = y.size();
    // Recompute the trend component directly.
    double mt = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mt += static_cast<double>(i);
        my += y[i];
    }
    mt /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (i - mt) * (i - mt);
        sxy += (i - mt) * (y[i] - my);
    }
    const double b = sxy / sxx, a = my - b * mt;
    const double trend_next = a + b * static_cast<double>(n);
    const double combo = theta_fit_predict(y, cfg);
    const double ses_next = 2.0 * combo - trend_next;   // invert the 0.5/0.5 mix
    const double lo = std::min(trend_next, ses_next);
    const double hi = std::max(trend_next, ses_next);
    CHECK(std::abs(trend_next - ses_next) > 1e-6);
    CHECK(combo > lo);
    CHECK(combo < hi);
}

TEST_CASE("naive predictor") {
    CHECK(naive_predict(std::vector<double>{1, 2, 3}) == 3.0);
    CHECK(naive_predict(std::vector<double>{5}) == 5.0);
    CHECK_THROWS_AS(naive_predict(std::vector<double>{}), EmptyHistory);
}

TEST_CASE("shift and scale equivariance") {
    std::mt19937_64 gen(4);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<double> y;
    for (int t = 0; t < 150; ++t) {
        y.push_back(0.2 * t + std::sin(0.3 * t) + noise(gen));
    }
    ForecasterConfig ar_cfg;
    ForecasterConfig theta_cfg;
    theta_cfg.kind = ForecasterKind::THETA;

    const double k_shift = 13.5;
    const double k_scale = -2.25;
    std::vector<double> shifted = y, scaled = y;
    for (auto& v : shifted) v += k_shift;
    for (auto& v : scaled) v *= k_scale;

    struct Case {
        const char* name;
        double base, shift, scale;
    };
    const Case cases[] = {
        {"ar", ar_fit_predict(y, ar_cfg), ar_fit_predict(shifted, ar_cfg),
         ar_fit_predict(scaled, ar_cfg)},
        {"theta", theta_fit_predict(y, theta_cfg),
         theta_fit_predict(shifted, theta_cfg),
         theta_fit_predict(scaled, theta_cfg)},
        {"naive", naive_predict(y), naive_predict(shifted),
         naive_predict(scaled)},
    };
    for (const auto& c : cases) {
        CAPTURE(c.name);
        CHECK(c.shift == doctest::Approx(c.base + k_shift).epsilon(1e-9));
        CHECK(c.scale == doctest::Approx(c.base * k_scale).epsilon(1e-9));
    }
}

TEST_CASE("incremental online ar matches batch refit") {
    std::mt19937_64 gen(8);
    std::normal_distribution<double> noise(0.0, 0.5);
    std::vector<double> y;
    for (int t = 0; t < 300; ++t) {
        y.push_back(1.0 + 0.6 * (y.empty() ? 0.0 : y.back()) + noise(gen));
    }
    ForecasterConfig cfg;
    Forecaster online(cfg);
    for (std::size_t n = 60; n <= y.size(); n += 7) {
        std::vector<double> history(y.begin(), y.begin() + n);
        const double batch = ar_fit_predict(history, cfg);
        const double inc = online.predict(history);
        CHECK(inc == doctest::Approx(batch).epsilon(1e-9));
    }
}
