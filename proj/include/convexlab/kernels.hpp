#pragma once

#include <cstddef>

// Batch kernels for the arithmetic inner loops (grid sweeps, minorant
// reductions). Each kernel has a scalar reference implementation and, on
// x86-64 builds, an AVX2 variant selected at runtime. The dispatched entry
// points below pick the active backend once per process; the per-backend
// namespaces stay visible so equivalence tests can run both side by side.

namespace convexlab::kernels {

enum class Backend { scalar, avx2 };

/// Backend picked at startup: AVX2 when compiled in and supported by the CPU,
/// overridable with CONVEXLAB_SIMD=scalar|avx2|auto.
Backend active_backend();
const char* backend_name(Backend b);

/// True when the AVX2 variants are compiled in and the CPU supports them.
bool avx2_available();

/// Batch energy evaluation at ordered singular-value pairs (l1 >= l2 > 0).
/// `param` carries the ADM gamma; the other kernels ignore it.
using BatchEvalFn = void (*)(const double* l1, const double* l2, double* out,
                             std::size_t n, double param);

void w0_eval(const double* l1, const double* l2, double* out, std::size_t n, double param = 0.0);
void aubert_eval(const double* l1, const double* l2, double* out, std::size_t n, double param = 0.0);
void adm_eval(const double* l1, const double* l2, double* out, std::size_t n, double gamma = 0.0);
void silhavy_eval(const double* l1, const double* l2, double* out, std::size_t n, double param = 0.0);

/// Reduction over a nu-grid of the per-point feasibility constraints on the
/// polyaffine cross-term coefficient c. For each point: with
///   dx1 = nu1-g1, dx2 = nu2-g2, cross = dx1*dx2,
///   resid = g_nu - g_at_gamma - d1*dx1 - d2*dx2,
/// a positive cross term demands c <= resid/cross, a negative one
/// c >= resid/cross, and |cross| <= cross_tol demands resid >= 0 outright.
struct MinorantReduction {
    double upper_bound;        // min over positive-cross constraints, +inf if none
    double lower_bound;        // max over negative-cross constraints, -inf if none
    double min_zero_residual;  // min resid over the |cross| <= cross_tol band, +inf if none
};

MinorantReduction minorant_reduce(double g1, double g2, double g_at_gamma,
                                  double d1, double d2,
                                  const double* nu1, const double* nu2,
                                  const double* g_nu, std::size_t n,
                                  double cross_tol);

namespace scalar {
void w0_eval(const double* l1, const double* l2, double* out, std::size_t n, double param = 0.0);
void aubert_eval(const double* l1, const double* l2, double* out, std::size_t n, double param = 0.0);
void adm_eval(const double* l1, const double* l2, double* out, std::size_t n, double gamma = 0.0);
void silhavy_eval(const double* l1, const double* l2, double* out, std::size_t n, double param = 0.0);
MinorantReduction minorant_reduce(double g1, double g2, double g_at_gamma,
                                  double d1, double d2,
                                  const double* nu1, const double* nu2,
                                  const double* g_nu, std::size_t n,
                                  double cross_tol);
}  // namespace scalar

namespace avx2 {
// Defined only in AVX2-enabled builds; callers must gate on avx2_available().
void w0_eval(const double* l1, const double* l2, double* out, std::size_t n, double param = 0.0);
void aubert_eval(const double* l1, const double* l2, double* out, std::size_t n, double param = 0.0);
void adm_eval(const double* l1, const double* l2, double* out, std::size_t n, double gamma = 0.0);
void silhavy_eval(const double* l1, const double* l2, double* out, std::size_t n, double param = 0.0);
MinorantReduction minorant_reduce(double g1, double g2, double g_at_gamma,
                                  double d1, double d2,
                                  const double* nu1, const double* nu2,
                                  const double* g_nu, std::size_t n,
                                  double cross_tol);
}  // namespace avx2

}  // namespace convexlab::kernels
