#include "convexlab/kernels.hpp"

#include <cmath>
#include <limits>

namespace convexlab::kernels::scalar {

void w0_eval(const double* l1, const double* l2, double* out, std::size_t n, double) {
    for (std::size_t i = 0; i < n; ++i) {
        const double k = l1[i] / l2[i];
        const double d = l1[i] * l2[i];
        out[i] = k - std::log(k) + std::log(d) + 1.0 / d;
    }
}

void aubert_eval(const double* l1, const double* l2, double* out, std::size_t n, double) {
    for (std::size_t i = 0; i < n; ++i) {
        const double a = l1[i], b = l2[i];
        const double a2 = a * a, b2 = b * b;
        out[i] = (a2 * a2 + b2 * b2) / 3.0 + 0.5 * a2 * b2 - (2.0 / 3.0) * a * b * (a2 + b2);
    }
}

void adm_eval(const double* l1, const double* l2, double* out, std::size_t n, double gamma) {
    for (std::size_t i = 0; i < n; ++i) {
        const double a = l1[i], b = l2[i];
        const double s = a * a + b * b;
        out[i] = s * s - 2.0 * gamma * s * a * b;
    }
}

void silhavy_eval(const double* l1, const double* l2, double* out, std::size_t n, double) {
    for (std::size_t i = 0; i < n; ++i) {
        const double a = l1[i], b = l2[i];
        out[i] = a <= 1.0 ? a * b : a + b - 1.0;
    }
}

MinorantReduction minorant_reduce(double g1, double g2, double g_at_gamma,
                                  double d1, double d2,
                                  const double* nu1, const double* nu2,
                                  const double* g_nu, std::size_t n,
                                  double cross_tol) {
    MinorantReduction r{std::numeric_limits<double>::infinity(),
                        -std::numeric_limits<double>::infinity(),
                        std::numeric_limits<double>::infinity()};
    for (std::size_t i = 0; i < n; ++i) {
        const double dx1 = nu1[i] - g1;
        const double dx2 = nu2[i] - g2;
        const double cross = dx1 * dx2;
        const double resid = g_nu[i] - g_at_gamma - d1 * dx1 - d2 * dx2;
        if (cross > cross_tol) {
            const double theta = resid / cross;
            if (theta < r.upper_bound) r.upper_bound = theta;
        } else if (cross < -cross_tol) {
            const double theta = resid / cross;
            if (theta > r.lower_bound) r.lower_bound = theta;
        } else {
            if (resid < r.min_zero_residual) r.min_zero_residual = resid;
        }
    }
    return r;
}

}  // namespace convexlab::kernels::scalar
