#include "convexlab/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace convexlab::kernels {

bool avx2_available() {
#if defined(CONVEXLAB_HAVE_AVX2)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Backend active_backend() {
    static const Backend backend = [] {
        const char* env = std::getenv("CONVEXLAB_SIMD");
        if (env != nullptr) {
            if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
            if (std::strcmp(env, "avx2") == 0 && avx2_available()) return Backend::avx2;
            // unknown value or unsupported request: fall through to auto
        }
        return avx2_available() ? Backend::avx2 : Backend::scalar;
    }();
    return backend;
}

const char* backend_name(Backend b) {
    return b == Backend::avx2 ? "avx2" : "scalar";
}

#if !defined(CONVEXLAB_HAVE_AVX2)
// Non-x86 or AVX2-less toolchain: keep the symbols, forward to scalar.
namespace avx2 {
void w0_eval(const double* l1, const double* l2, double* out, std::size_t n, double param) {
    scalar::w0_eval(l1, l2, out, n, param);
}
void aubert_eval(const double* l1, const double* l2, double* out, std::size_t n, double param) {
    scalar::aubert_eval(l1, l2, out, n, param);
}
void adm_eval(const double* l1, const double* l2, double* out, std::size_t n, double gamma) {
    scalar::adm_eval(l1, l2, out, n, gamma);
}
void silhavy_eval(const double* l1, const double* l2, double* out, std::size_t n, double param) {
    scalar::silhavy_eval(l1, l2, out, n, param);
}
MinorantReduction minorant_reduce(double g1, double g2, double g_at_gamma,
                                  double d1, double d2,
                                  const double* nu1, const double* nu2,
                                  const double* g_nu, std::size_t n,
                                  double cross_tol) {
    return scalar::minorant_reduce(g1, g2, g_at_gamma, d1, d2, nu1, nu2, g_nu, n, cross_tol);
}
}  // namespace avx2
#endif

void w0_eval(const double* l1, const double* l2, double* out, std::size_t n, double param) {
    if (active_backend() == Backend::avx2) return avx2::w0_eval(l1, l2, out, n, param);
    scalar::w0_eval(l1, l2, out, n, param);
}

void aubert_eval(const double* l1, const double* l2, double* out, std::size_t n, double param) {
    if (active_backend() == Backend::avx2) return avx2::aubert_eval(l1, l2, out, n, param);
    scalar::aubert_eval(l1, l2, out, n, param);
}

void adm_eval(const double* l1, const double* l2, double* out, std::size_t n, double gamma) {
    if (active_backend() == Backend::avx2) return avx2::adm_eval(l1, l2, out, n, gamma);
    scalar::adm_eval(l1, l2, out, n, gamma);
}

void silhavy_eval(const double* l1, const double* l2, double* out, std::size_t n, double param) {
    if (active_backend() == Backend::avx2) return avx2::silhavy_eval(l1, l2, out, n, param);
    scalar::silhavy_eval(l1, l2, out, n, param);
}

MinorantReduction minorant_reduce(double g1, double g2, double g_at_gamma,
                                  double d1, double d2,
                                  const double* nu1, const double* nu2,
                                  const double* g_nu, std::size_t n,
                                  double cross_tol) {
    if (active_backend() == Backend::avx2) {
        return avx2::minorant_reduce(g1, g2, g_at_gamma, d1, d2, nu1, nu2, g_nu, n, cross_tol);
    }
    return scalar::minorant_reduce(g1, g2, g_at_gamma, d1, d2, nu1, nu2, g_nu, n, cross_tol);
}

}  // namespace convexlab::kernels
