#pragma once

namespace eci {

/// Sigmoid smoothing kernel f(x) = 1 / (1 + exp(-c*x)) with scale c > 0.
struct SmoothingKernel {
    double c = 1.0;
};

/// f(x); stable for |c*x| up to ~700 (never exponentiates a large
/// positive argument).
double sigmoid_value(const SmoothingKernel& kernel, double x);

/// c * f(x) * (1 - f(x)); bounded by c/4, maximum at x = 0.
double sigmoid_grad(const SmoothingKernel& kernel, double x);

/// Error-quantification term x * grad f(x). Odd in x, |result| <= 1/e.
double eq_term(const SmoothingKernel& kernel, double x);

/// EQ term suppressed below the cutoff: eq_term(x) if |x| > h, else 0.
/// The boundary |x| == h yields 0.
double eq_term_cutoff(const SmoothingKernel& kernel, double x, double h);

/// Bound lambda with |x grad f(x)| <= lambda. Default mode returns the
/// analytic bound 1/e (independent of c). Tight mode grid-searches
/// |u sigma(u)(1-sigma(u))| over u = c*x in [-20, 20] at step 1e-4.
double lambda_sup(const SmoothingKernel& kernel, bool tight = false);

} // namespace eci
