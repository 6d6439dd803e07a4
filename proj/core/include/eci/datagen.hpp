#pragma once

#include <cstdint>
#include <vector>

namespace eci {

/// Piecewise-constant linear model Y_t = <X_t, beta_t> + eps_t with i.i.d.
/// standard normal features and noise.
struct SyntheticSegment {
    std::vector<double> beta;
    std::size_t length = 0;
};

struct SyntheticSpec {
    std::vector<SyntheticSegment> segments;
    std::size_t feature_dim = 4;
    double noise_sd = 1.0;
    std::uint64_t seed = 0;
};

/// The changepoint design used throughout: d=4, segments
/// (2,1,0,0)x500, (0,-2,-1,0)x1000, (0,0,2,1)x500, unit noise.
SyntheticSpec changepoint_spec(std::uint64_t seed);

struct SyntheticData {
    std::vector<double> y;
    std::vector<std::vector<double>> x;   // one row per step
};

/// Deterministic given the seed. X and eps come from independent RNG
/// streams split off the seed, and normals are drawn by inverse-CDF of
/// mt19937_64 uniforms, so the same seed reproduces the same series in
/// any implementation of these primitives.
SyntheticData generate(const SyntheticSpec& spec);

/// Standard normal quantile function (Acklam's rational approximation
/// with one Halley refinement; absolute error below 1e-13).
double normal_quantile(double p);

} // namespace eci
