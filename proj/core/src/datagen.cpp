#include "eci/datagen.hpp"

#include <cmath>
#include <random>

#include "eci/errors.hpp"

namespace eci {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Uniform in (0,1), 53-bit, strictly inside the open interval.
double next_uniform(std::mt19937_64& gen) {
    return (static_cast<double>(gen() >> 11) + 0.5) * 0x1p-53;
}

double next_normal(std::mt19937_64& gen) {
    return normal_quantile(next_uniform(gen));
}

} // namespace

double normal_quantile(double p) {
    // Acklam's coefficients.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
             c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r +
             a[5]) *
            q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r +
             1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
              c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    // One Halley refinement against erfc.
    const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
    const double u = e * std::sqrt(2.0 * M_PI) * std::exp(x * x / 2.0);
    return x - u / (1.0 + x * u / 2.0);
}

SyntheticSpec changepoint_spec(std::uint64_t seed) {
    SyntheticSpec spec;
    spec.feature_dim = 4;
    spec.noise_sd = 1.0;
    spec.seed = seed;
    spec.segments = {{{2.0, 1.0, 0.0, 0.0}, 500},
                     {{0.0, -2.0, -1.0, 0.0}, 1000},
                     {{0.0, 0.0, 2.0, 1.0}, 500}};
    return spec;
}

SyntheticData generate(const SyntheticSpec& spec) {
    for (const auto& seg : spec.segments) {
        if (seg.beta.size() != spec.feature_dim) {
            throw DimensionMismatch(
                "segment beta dimension " + std::to_string(seg.beta.size()) +
                " != feature_dim " + std::to_string(spec.feature_dim));
        }
    }
    // Independent streams for features and noise, split off the seed.
    std::mt19937_64 gen_x(splitmix64(spec.seed ^ 0x584d2d1b84a3f6c1ULL));
    std::mt19937_64 gen_eps(splitmix64(spec.seed ^ 0x2545f4914f6cdd1dULL));

    SyntheticData data;
    for (const auto& seg : spec.segments) {
        for (std::size_t i = 0; i < seg.length; ++i) {
            std::vector<double> row(spec.feature_dim);
            double y = 0.0;
            for (std::size_t j = 0; j < spec.feature_dim; ++j) {
                row[j] = next_normal(gen_x);
                y += row[j] * seg.beta[j];
            }
            y += spec.noise_sd * next_normal(gen_eps);
            data.x.push_back(std::move(row));
            data.y.push_back(y);
        }
    }
    return data;
}

} // namespace eci
