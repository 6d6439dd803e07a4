#include "eci/smoothing.hpp"

#include <algorithm>
#include <cmath>

namespace eci {

double sigmoid_value(const SmoothingKernel& kernel, double x) {
    const double z = kernel.c * x;
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

double sigmoid_grad(const SmoothingKernel& kernel, double x) {
    // sigma'(z) = e^{-|z|} / (1 + e^{-|z|})^2, evaluated symmetrically so
    // the gradient is exactly even (and the EQ term exactly odd).
    const double e = std::exp(-std::abs(kernel.c * x));
    return kernel.c * e / ((1.0 + e) * (1.0 + e));
}

double eq_term(const SmoothingKernel& kernel, double x) {
    return x * sigmoid_grad(kernel, x);
}

double eq_term_cutoff(const SmoothingKernel& kernel, double x, double h) {
    if (std::abs(x) > h) {
        return eq_term(kernel, x);
    }
    return 0.0;
}

double lambda_sup(const SmoothingKernel& kernel, bool tight) {
    (void)kernel;
    if (!tight) {
        // Analytic bound |x grad f(x)| <= 1/e, independent of c.
        return std::exp(-1.0);
    }
    // sup over u = c*x of |u sigma(u)(1-sigma(u))|; symmetric in u.
    const SmoothingKernel unit{1.0};
    double best = 0.0;
    for (long i = 0; i <= 200000; ++i) {
        const double u = i * 1e-4;
        best = std::max(best, std::abs(eq_term(unit, u)));
    }
    return best;
}

} // namespace eci
