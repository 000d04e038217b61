#pragma once

#include <stdexcept>
#include <string>

namespace convexlab {

/// Real 2x2 matrix, row-major. Construction rejects NaN/Inf entries.
struct Mat2 {
    double a11 = 0.0, a12 = 0.0;
    double a21 = 0.0, a22 = 0.0;

    Mat2() = default;
    Mat2(double m11, double m12, double m21, double m22);

    static Mat2 identity() { return Mat2(1.0, 0.0, 0.0, 1.0); }
    static Mat2 diag(double d1, double d2) { return Mat2(d1, 0.0, 0.0, d2); }

    double det() const { return a11 * a22 - a12 * a21; }
    double trace() const { return a11 + a22; }
    double frobenius_norm() const;
    /// Largest singular value.
    double operator_norm() const;

    Mat2 transposed() const { return Mat2(a11, a21, a12, a22); }
    Mat2 cofactor() const { return Mat2(a22, -a21, -a12, a11); }

    Mat2 operator+(const Mat2& o) const { return Mat2(a11 + o.a11, a12 + o.a12, a21 + o.a21, a22 + o.a22); }
    Mat2 operator-(const Mat2& o) const { return Mat2(a11 - o.a11, a12 - o.a12, a21 - o.a21, a22 - o.a22); }
    Mat2 operator*(const Mat2& o) const;
    Mat2 operator*(double s) const { return Mat2(s * a11, s * a12, s * a21, s * a22); }
};

inline Mat2 operator*(double s, const Mat2& m) { return m * s; }

/// Frobenius inner product <A, B>.
double inner(const Mat2& a, const Mat2& b);

/// Rotation by `angle`: [[cos, sin], [-sin, cos]].
Mat2 rotation(double angle);

/// Normalize an angle into (-pi, pi], mapping a -pi result to +pi.
double normalize_angle(double angle);

/// Ordered singular value decomposition of F: the rotations
/// Q1 = rotation(q1_angle), Q2 = rotation(q2_angle) diagonalize F as
/// Q1 * F * Q2 = diag(lambda1, det_sign * lambda2) with lambda1 >= lambda2 >= 0.
/// det_sign is +1 whenever det F >= 0, so on GL+(2) both factors are proper
/// rotations and F = Q1^T * diag(lambda1, lambda2) * Q2^T.
struct OrderedSV {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double q1_angle = 0.0;
    double q2_angle = 0.0;
    double det_sign = 1.0;

    Mat2 reconstruct() const;
};

/// Rank-one direction: H = magnitude * a(theta) * b(phi)^T with unit vectors
/// a(t) = (cos t, sin t).
struct RankOneDir {
    double left_angle = 0.0;
    double right_angle = 0.0;
    double magnitude = 1.0;
};

OrderedSV svd_ordered(const Mat2& f);

/// K(F) = |||F|||^2 / det F = lambda_max / lambda_min. Requires det F > 0.
double linear_distortion(const Mat2& f);

/// Q^s = exp(s log Q) for Q in SO(2), s in [0, 1].
Mat2 rotation_power(const Mat2& q, double s);

/// Angle of a rotation matrix in (-pi, pi]. Throws if Q is not in SO(2).
double rotation_angle(const Mat2& q);

Mat2 rank_one_matrix(const RankOneDir& d);

/// Operator-norm distance from F to the rank-deficient matrices, = lambda_min(F).
/// Requires det F > 0.
double boundary_distance(const Mat2& f);

}  // namespace convexlab
