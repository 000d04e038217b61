#include "convexlab/mat2.hpp"

#include <cmath>

namespace convexlab {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool all_finite(double a, double b, double c, double d) {
    return std::isfinite(a) && std::isfinite(b) && std::isfinite(c) && std::isfinite(d);
}

}  // namespace

Mat2::Mat2(double m11, double m12, double m21, double m22)
    : a11(m11), a12(m12), a21(m21), a22(m22) {
    if (!all_finite(m11, m12, m21, m22)) {
        throw std::invalid_argument("Mat2: entries must be finite");
    }
}

double Mat2::frobenius_norm() const {
    return std::sqrt(a11 * a11 + a12 * a12 + a21 * a21 + a22 * a22);
}

double Mat2::operator_norm() const {
    return svd_ordered(*this).lambda1;
}

Mat2 Mat2::operator*(const Mat2& o) const {
    return Mat2(a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22,
                a21 * o.a11 + a22 * o.a21, a21 * o.a12 + a22 * o.a22);
}

double inner(const Mat2& a, const Mat2& b) {
    return a.a11 * b.a11 + a.a12 * b.a12 + a.a21 * b.a21 + a.a22 * b.a22;
}

Mat2 rotation(double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return Mat2(c, s, -s, c);
}

double normalize_angle(double angle) {
    double a = std::remainder(angle, 2.0 * kPi);
    if (a <= -kPi) a = kPi;
    return a;
}

Mat2 OrderedSV::reconstruct() const {
    const Mat2 d = Mat2::diag(lambda1, det_sign * lambda2);
    return rotation(q1_angle).transposed() * d * rotation(q2_angle).transposed();
}

OrderedSV svd_ordered(const Mat2& f) {
    // Symmetrize: S = rot(beta) * F has S12 == S21 and trace(S) >= 0.
    const double beta = std::atan2(f.a21 - f.a12, f.a11 + f.a22);
    const Mat2 s = rotation(beta) * f;
    const double off = 0.5 * (s.a12 + s.a21);

    // Jacobi angle zeta with rot(zeta) * S * rot(zeta)^T diagonal. The atan2
    // branch puts the larger value first. A vanishing argument pair means S is
    // a multiple of the identity (scaled rotation input); pick zeta = 0 so the
    // factors are deterministic.
    const double p = 2.0 * off;
    const double q = s.a11 - s.a22;
    const double scale = std::fabs(s.a11) + std::fabs(s.a22) + std::fabs(off);
    double zeta = 0.0;
    if (std::hypot(p, q) > 1e-14 * scale) {
        zeta = 0.5 * std::atan2(p, q);
    }

    OrderedSV sv;
    sv.q1_angle = normalize_angle(zeta + beta);
    sv.q2_angle = normalize_angle(-zeta);

    const Mat2 d = rotation(sv.q1_angle) * f * rotation(sv.q2_angle);
    const double d1 = d.a11;
    const double d2 = d.a22;
    sv.lambda1 = d1;
    sv.lambda2 = std::fabs(d2);
    sv.det_sign = d2 < 0.0 ? -1.0 : 1.0;
    return sv;
}

double linear_distortion(const Mat2& f) {
    if (!(f.det() > 0.0)) {
        throw std::domain_error("linear_distortion: requires det F > 0");
    }
    const OrderedSV sv = svd_ordered(f);
    return sv.lambda1 / sv.lambda2;
}

double rotation_angle(const Mat2& q) {
    const double tol = 1e-9;
    const Mat2 qtq = q.transposed() * q;
    const double ortho_err = std::fabs(qtq.a11 - 1.0) + std::fabs(qtq.a12) +
                             std::fabs(qtq.a21) + std::fabs(qtq.a22 - 1.0);
    if (ortho_err > tol || std::fabs(q.det() - 1.0) > tol) {
        throw std::domain_error("rotation_angle: matrix is not in SO(2)");
    }
    return std::atan2(q.a12, q.a11);
}

Mat2 rotation_power(const Mat2& q, double s) {
    if (!(s >= 0.0 && s <= 1.0)) {
        throw std::domain_error("rotation_power: exponent must lie in [0, 1]");
    }
    return rotation(s * rotation_angle(q));
}

Mat2 rank_one_matrix(const RankOneDir& d) {
    if (!(d.magnitude > 0.0)) {
        throw std::domain_error("rank_one_matrix: magnitude must be positive");
    }
    const double ct = std::cos(d.left_angle), st = std::sin(d.left_angle);
    const double cp = std::cos(d.right_angle), sp = std::sin(d.right_angle);
    return Mat2(d.magnitude * ct * cp, d.magnitude * ct * sp,
                d.magnitude * st * cp, d.magnitude * st * sp);
}

double boundary_distance(const Mat2& f) {
    if (!(f.det() > 0.0)) {
        throw std::domain_error("boundary_distance: requires det F > 0");
    }
    return svd_ordered(f).lambda2;
}

}  // namespace convexlab
