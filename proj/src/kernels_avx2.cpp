#include <immintrin.h>

#include <cmath>
#include <limits>

#include "convexlab/kernels.hpp"

// AVX2 variants of the batch kernels. Tail elements (n % 4) fall back to the
// scalar reference. Inputs are assumed to be normal positive doubles, which
// the singular-value domain guarantees.

namespace convexlab::kernels::avx2 {

namespace {

// log over a lane of positive normal doubles: x = m * 2^e with
// m in [1/sqrt2, sqrt2), then the atanh series in r = (m-1)/(m+1),
// truncated after r^19 (|r| <= 0.1716 keeps the tail below 1 ulp).
inline __m256d log_pd(__m256d x) {
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256i bits = _mm256_castpd_si256(x);
    const __m256i exp_biased =
        _mm256_and_si256(_mm256_srli_epi64(bits, 52), _mm256_set1_epi64x(0x7ff));
    const __m256i mant =
        _mm256_or_si256(_mm256_and_si256(bits, _mm256_set1_epi64x(0x000fffffffffffffLL)),
                        _mm256_set1_epi64x(0x3ff0000000000000LL));
    __m256d m = _mm256_castsi256_pd(mant);

    // int64 -> double for exponents in [0, 2046]
    const __m256d magic = _mm256_castsi256_pd(_mm256_set1_epi64x(0x4330000000000000LL));
    __m256d e = _mm256_sub_pd(
        _mm256_castsi256_pd(_mm256_or_si256(exp_biased, _mm256_set1_epi64x(0x4330000000000000LL))),
        magic);
    e = _mm256_sub_pd(e, _mm256_set1_pd(1023.0));

    const __m256d sqrt2 = _mm256_set1_pd(1.4142135623730951);
    const __m256d gt = _mm256_cmp_pd(m, sqrt2, _CMP_GT_OQ);
    m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), gt);
    e = _mm256_blendv_pd(e, _mm256_add_pd(e, one), gt);

    const __m256d r = _mm256_div_pd(_mm256_sub_pd(m, one), _mm256_add_pd(m, one));
    const __m256d r2 = _mm256_mul_pd(r, r);
    __m256d p = _mm256_set1_pd(1.0 / 19.0);
    p = _mm256_fmadd_pd(p, r2, _mm256_set1_pd(1.0 / 17.0));
    p = _mm256_fmadd_pd(p, r2, _mm256_set1_pd(1.0 / 15.0));
    p = _mm256_fmadd_pd(p, r2, _mm256_set1_pd(1.0 / 13.0));
    p = _mm256_fmadd_pd(p, r2, _mm256_set1_pd(1.0 / 11.0));
    p = _mm256_fmadd_pd(p, r2, _mm256_set1_pd(1.0 / 9.0));
    p = _mm256_fmadd_pd(p, r2, _mm256_set1_pd(1.0 / 7.0));
    p = _mm256_fmadd_pd(p, r2, _mm256_set1_pd(1.0 / 5.0));
    p = _mm256_fmadd_pd(p, r2, _mm256_set1_pd(1.0 / 3.0));
    p = _mm256_fmadd_pd(p, r2, one);
    const __m256d logm = _mm256_mul_pd(_mm256_mul_pd(_mm256_set1_pd(2.0), r), p);

    const __m256d ln2_hi = _mm256_set1_pd(6.93147180369123816490e-01);
    const __m256d ln2_lo = _mm256_set1_pd(1.90821492927058770002e-10);
    return _mm256_fmadd_pd(e, ln2_hi, _mm256_fmadd_pd(e, ln2_lo, logm));
}

inline double hmin(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d m2 = _mm_min_pd(lo, hi);
    const __m128d m1 = _mm_min_sd(m2, _mm_unpackhi_pd(m2, m2));
    return _mm_cvtsd_f64(m1);
}

inline double hmax(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d m2 = _mm_max_pd(lo, hi);
    const __m128d m1 = _mm_max_sd(m2, _mm_unpackhi_pd(m2, m2));
    return _mm_cvtsd_f64(m1);
}

}  // namespace

void w0_eval(const double* l1, const double* l2, double* out, std::size_t n, double param) {
    std::size_t i = 0;
    const __m256d one = _mm256_set1_pd(1.0);
    for (; i + 4 <= n; i += 4) {
        const __m256d a = _mm256_loadu_pd(l1 + i);
        const __m256d b = _mm256_loadu_pd(l2 + i);
        const __m256d k = _mm256_div_pd(a, b);
        const __m256d d = _mm256_mul_pd(a, b);
        const __m256d v = _mm256_add_pd(
            _mm256_sub_pd(k, log_pd(k)),
            _mm256_add_pd(log_pd(d), _mm256_div_pd(one, d)));
        _mm256_storeu_pd(out + i, v);
    }
    if (i < n) scalar::w0_eval(l1 + i, l2 + i, out + i, n - i, param);
}

void aubert_eval(const double* l1, const double* l2, double* out, std::size_t n, double param) {
    std::size_t i = 0;
    const __m256d third = _mm256_set1_pd(1.0 / 3.0);
    const __m256d half = _mm256_set1_pd(0.5);
    const __m256d two_thirds = _mm256_set1_pd(2.0 / 3.0);
    for (; i + 4 <= n; i += 4) {
        const __m256d a = _mm256_loadu_pd(l1 + i);
        const __m256d b = _mm256_loadu_pd(l2 + i);
        const __m256d a2 = _mm256_mul_pd(a, a);
        const __m256d b2 = _mm256_mul_pd(b, b);
        const __m256d quart = _mm256_fmadd_pd(a2, a2, _mm256_mul_pd(b2, b2));
        const __m256d s = _mm256_add_pd(a2, b2);
        const __m256d ab = _mm256_mul_pd(a, b);
        __m256d v = _mm256_mul_pd(third, quart);
        v = _mm256_fmadd_pd(half, _mm256_mul_pd(a2, b2), v);
        v = _mm256_sub_pd(v, _mm256_mul_pd(two_thirds, _mm256_mul_pd(ab, s)));
        _mm256_storeu_pd(out + i, v);
    }
    if (i < n) scalar::aubert_eval(l1 + i, l2 + i, out + i, n - i, param);
}

void adm_eval(const double* l1, const double* l2, double* out, std::size_t n, double gamma) {
    std::size_t i = 0;
    const __m256d g2 = _mm256_set1_pd(2.0 * gamma);
    for (; i + 4 <= n; i += 4) {
        const __m256d a = _mm256_loadu_pd(l1 + i);
        const __m256d b = _mm256_loadu_pd(l2 + i);
        const __m256d s = _mm256_fmadd_pd(a, a, _mm256_mul_pd(b, b));
        const __m256d ab = _mm256_mul_pd(a, b);
        const __m256d v = _mm256_fmsub_pd(s, s, _mm256_mul_pd(g2, _mm256_mul_pd(s, ab)));
        _mm256_storeu_pd(out + i, v);
    }
    if (i < n) scalar::adm_eval(l1 + i, l2 + i, out + i, n - i, gamma);
}

void silhavy_eval(const double* l1, const double* l2, double* out, std::size_t n, double param) {
    std::size_t i = 0;
    const __m256d one = _mm256_set1_pd(1.0);
    for (; i + 4 <= n; i += 4) {
        const __m256d a = _mm256_loadu_pd(l1 + i);
        const __m256d b = _mm256_loadu_pd(l2 + i);
        const __m256d prod = _mm256_mul_pd(a, b);
        const __m256d sum = _mm256_sub_pd(_mm256_add_pd(a, b), one);
        const __m256d use_prod = _mm256_cmp_pd(a, one, _CMP_LE_OQ);
        _mm256_storeu_pd(out + i, _mm256_blendv_pd(sum, prod, use_prod));
    }
    if (i < n) scalar::silhavy_eval(l1 + i, l2 + i, out + i, n - i, param);
}

MinorantReduction minorant_reduce(double g1, double g2, double g_at_gamma,
                                  double d1, double d2,
                                  const double* nu1, const double* nu2,
                                  const double* g_nu, std::size_t n,
                                  double cross_tol) {
    const double inf = std::numeric_limits<double>::infinity();
    __m256d upper = _mm256_set1_pd(inf);
    __m256d lower = _mm256_set1_pd(-inf);
    __m256d zmin = _mm256_set1_pd(inf);

    const __m256d vg1 = _mm256_set1_pd(g1);
    const __m256d vg2 = _mm256_set1_pd(g2);
    const __m256d vgv = _mm256_set1_pd(g_at_gamma);
    const __m256d vd1 = _mm256_set1_pd(d1);
    const __m256d vd2 = _mm256_set1_pd(d2);
    const __m256d tol = _mm256_set1_pd(cross_tol);
    const __m256d ntol = _mm256_set1_pd(-cross_tol);
    const __m256d pinf = _mm256_set1_pd(inf);
    const __m256d ninf = _mm256_set1_pd(-inf);

    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d dx1 = _mm256_sub_pd(_mm256_loadu_pd(nu1 + i), vg1);
        const __m256d dx2 = _mm256_sub_pd(_mm256_loadu_pd(nu2 + i), vg2);
        const __m256d cross = _mm256_mul_pd(dx1, dx2);
        // same association as the scalar reference, no fused ops
        __m256d resid = _mm256_sub_pd(_mm256_loadu_pd(g_nu + i), vgv);
        resid = _mm256_sub_pd(resid, _mm256_mul_pd(vd1, dx1));
        resid = _mm256_sub_pd(resid, _mm256_mul_pd(vd2, dx2));
        const __m256d theta = _mm256_div_pd(resid, cross);

        const __m256d pos = _mm256_cmp_pd(cross, tol, _CMP_GT_OQ);
        const __m256d neg = _mm256_cmp_pd(cross, ntol, _CMP_LT_OQ);
        const __m256d band = _mm256_andnot_pd(_mm256_or_pd(pos, neg),
                                              _mm256_castsi256_pd(_mm256_set1_epi64x(-1)));

        upper = _mm256_min_pd(upper, _mm256_blendv_pd(pinf, theta, pos));
        lower = _mm256_max_pd(lower, _mm256_blendv_pd(ninf, theta, neg));
        zmin = _mm256_min_pd(zmin, _mm256_blendv_pd(pinf, resid, band));
    }

    MinorantReduction r{hmin(upper), hmax(lower), hmin(zmin)};
    if (i < n) {
        const MinorantReduction tail = scalar::minorant_reduce(
            g1, g2, g_at_gamma, d1, d2, nu1 + i, nu2 + i, g_nu + i, n - i, cross_tol);
        r.upper_bound = std::min(r.upper_bound, tail.upper_bound);
        r.lower_bound = std::max(r.lower_bound, tail.lower_bound);
        r.min_zero_residual = std::min(r.min_zero_residual, tail.min_zero_residual);
    }
    return r;
}

}  // namespace convexlab::kernels::avx2
