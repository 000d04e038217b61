#pragma once

#include <optional>
#include <string>
#include <vector>

#include "convexlab/energy.hpp"

namespace convexlab {

/// Admissible interval for the polyaffine cross-term coefficient c at a
/// separated ordered pair (gamma1, gamma2). c_lo <= c_hi is not asserted: an
/// empty interval is itself a polyconvexity failure at gamma.
struct CInterval {
    double gamma1 = 0.0, gamma2 = 0.0;
    double c_lo = 0.0, c_hi = 0.0;
    bool empty(double tol = 0.0) const { return c_lo > c_hi + tol; }
};

/// Endpoints from the partials of E at (gamma1, gamma2):
///   c_lo = -(d1 - d2) / (gamma1 - gamma2),  c_hi = (d1 + d2) / (gamma1 + gamma2).
/// Requires gamma1 - gamma2 >= sep_margin (SeparationError otherwise); seam
/// points propagate SeamError.
CInterval c_interval(const OrderedSVEnergy& e, double gamma1, double gamma2,
                     double sep_margin = 1e-6);

/// Left side minus right side of the polyaffine minorant inequality at nu:
///   g(nu) - [g(gamma) + d1 (nu1-gamma1) + d2 (nu2-gamma2) + c (nu1-gamma1)(nu2-gamma2)].
/// Nonnegative means the minorant holds at nu for this (gamma, c).
double minorant_residual(const OrderedSVEnergy& e, double g1, double g2,
                         double n1, double n2, double c);

enum class BoundOrientation { upper, lower };  // c <= threshold / c >= threshold

struct RequiredCBound {
    double threshold = 0.0;
    BoundOrientation orientation = BoundOrientation::upper;
};

/// Solve the minorant inequality for c at a fixed (gamma, nu): the sign of the
/// cross term decides the orientation. Degenerate cross term -> error.
RequiredCBound required_c_bound(const OrderedSVEnergy& e, double g1, double g2,
                                double n1, double n2);

/// Log-spaced axis with selected nodes snapped to exact values; pairs (a, b)
/// with a >= b realize a grid on the ordered domain.
struct SVGrid {
    std::vector<double> axis;

    static SVGrid log_grid(double lo, double hi, int n,
                           const std::vector<double>& required_nodes = {});

    /// Ordered pairs, lexicographic in (first, second).
    std::vector<std::pair<double, double>> ordered_pairs(double min_separation = 0.0) const;
};

SVGrid default_gamma_grid();  // 40 per axis over [e^-2, e^5], nodes 1, e, e^3, e^4
SVGrid default_nu_grid();     // 60 per axis over [e^-2, e^3], nodes 1, e, e^3

struct PolyWitness {
    double gamma1 = 0.0, gamma2 = 0.0;
    CInterval interval;
    // single-nu block: no c in the interval satisfies the minorant at nu
    double nu1 = 0.0, nu2 = 0.0;
    double required_bound = 0.0;
    BoundOrientation orientation = BoundOrientation::upper;
    double residual = 0.0;  // positive emptiness margin
    // joint block: the upper constraint at nu and the lower one at nu_other
    bool joint = false;
    double nu_other1 = 0.0, nu_other2 = 0.0;
};

struct FalsifyOptions {
    double sep_margin = 1e-6;
    double cross_tol = 1e-30;  // |cross| at or below counts as a zero cross term
    double empty_tol = 1e-9;
};

struct FalsifyResult {
    bool falsified = false;
    std::optional<PolyWitness> witness;
    long gammas_checked = 0;
    long gammas_skipped = 0;  // seam or separation skips
    std::string resolution;
};

/// For each gamma: intersect [c_lo, c_hi] with every per-nu feasibility
/// half-line; an empty intersection falsifies polyconvexity at gamma. The
/// witness is deterministic: lexicographically first gamma, then the first nu
/// whose constraint alone empties the interval (or the binding pair).
FalsifyResult polyconvexity_falsify(const OrderedSVEnergy& e,
                                    const SVGrid& gamma_grid,
                                    const SVGrid& nu_grid,
                                    const FalsifyOptions& opt = {});

}  // namespace convexlab
