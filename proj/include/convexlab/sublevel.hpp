#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "convexlab/energy.hpp"

namespace convexlab {

enum class Verdict { pass, fail, inconclusive };
const char* verdict_name(Verdict v);

// ---- growth ---------------------------------------------------------------

enum class GrowthDirection { to_infinity, to_zero };

struct GrowthCheckOptions {
    int decades = 6;               // tail samples t = base^k (or base^-k), k = 1..decades
    double base = 10.0;
    int monotone_tail = 3;         // trailing increments that must be positive
    double min_last_rise = 0.05;   // minimum final per-decade increment
    double clear_threshold = 10.0; // minimum final value
};

struct GrowthVerdict {
    Verdict verdict = Verdict::inconclusive;
    double counter_t = 0.0;        // counter-sample when failing
    double counter_value = 0.0;
    std::string note;
};

/// Numeric divergence evidence along a geometric tail: the trailing increments
/// must be positive, keep a minimum per-decade rise, and the last value must
/// clear the threshold. A pass is evidence at the sampled scale, not a proof.
GrowthVerdict growth_check(const std::function<double(double)>& g, GrowthDirection dir,
                           const GrowthCheckOptions& opt = {});

// ---- compactness ------------------------------------------------------------

struct CompactnessReport {
    GrowthVerdict h_at_inf;
    GrowthVerdict f_at_inf;
    GrowthVerdict f_at_zero;
    bool split_path = false;        // constructive bounds below are filled in
    double lower_bound_d = 0.0;     // numeric lower bound of min(hhat, f)
    double radius = 0.0;            // S_c lies in {|||F||| <= radius}
    double boundary_margin = 0.0;   // dist(S_c, boundary of GL+(2)) >= this
    Verdict overall = Verdict::inconclusive;
    std::string note;
};

/// Constructive compactness bounds for a split energy at level c: growth
/// checks on hhat and f, a sampled lower bound d, then the smallest radius r
/// with hhat, f > c - d beyond r and the boundary margin from the det/K
/// dichotomy. Fails with counter-samples when a growth check fails.
CompactnessReport compactness_check(const VolIsoSplitEnergy& e, double c);

/// Probe-based variant for energies without a split: growth of W along the
/// curves diag(sqrt(t), 1/sqrt(t)) (distortion ray, det = 1) and
/// diag(sqrt(t), sqrt(t)) (conformal ray) in both det directions. A failing
/// probe certifies non-compactness; passing probes are inconclusive.
CompactnessReport compactness_check_probe(const OrderedSVEnergy& e, double c);

// ---- connectedness paths ----------------------------------------------------

struct PathSegment {
    enum class Kind { rotation_interp, distortion_descent, conformal_scale, axis_line, conformal_line };
    Kind kind = Kind::rotation_interp;
    std::string label;
    std::function<Mat2(double)> eval;  // s in [0, 1]
};

struct SublevelPath {
    std::vector<PathSegment> segments;
    double level = 0.0;
    bool reversed = false;  // endpoints were swapped for the K-ordering WLOG
};

struct SegmentStats {
    PathSegment::Kind kind;
    double min_energy_deriv = 0.0;  // sampled d/ds of W along the segment
    double max_energy_deriv = 0.0;
    double det_drift = 0.0;         // max |det(s) - det(0)|
    double k_drift = 0.0;           // max |K(s) - K(0)|
    double energy_drift = 0.0;      // max |W(s) - W(0)|
};

struct PathValidation {
    bool ok = true;
    double max_energy_excess = 0.0;  // max over samples of W - c
    double max_endpoint_gap = 0.0;   // consecutive segment mismatch
    std::vector<SegmentStats> segments;
};

/// Sample the path (default 200 points per segment) and measure continuity,
/// the sublevel bound W <= c + 1e-9, and per-segment drift statistics.
PathValidation validate_path(const OrderedSVEnergy& e, const SublevelPath& path,
                             int samples_per_segment = 200);

/// Four-segment path F -> F~ inside S_c for a split energy with nondecreasing
/// hhat and q-convex f (hypotheses verified numerically unless suppressed):
/// rotation interpolation, constant-determinant distortion descent, conformal
/// scaling at constant K, rotation interpolation. If K(F~) > K(F) the
/// construction runs on swapped endpoints and the path is reversed.
SublevelPath connect_path(const VolIsoSplitEnergy& e, const Mat2& f, const Mat2& f_tilde,
                          double c, bool verify_hypotheses = true);

/// Appendix-style path for the quartic polynomial energy: rotate to ordered
/// diagonal form, raise the small axis to the conformal ray, slide along it,
/// then descend the second axis; rotate into the target frame.
SublevelPath aubert_connect_path(const Mat2& f, const Mat2& f_tilde, double c);

// ---- q-convexity --------------------------------------------------------------

struct QConvexityResult {
    Verdict verdict = Verdict::pass;
    double witness_a = 0.0, witness_t = 0.0, witness_b = 0.0;  // violating triple
};

/// Betweenness-max check g(t) <= max(g(a), g(b)) over all sampled triples
/// a <= t <= b, by prefix/suffix minima.
QConvexityResult q_convexity_1d(const std::function<double(double)>& g,
                                const std::vector<double>& samples);

std::vector<double> log_samples(double lo, double hi, int n);

// ---- grid connectivity ----------------------------------------------------------

struct ConnectivityResult {
    int components = 0;
    long in_set = 0;
    int n_u = 0, n_v = 0;
    std::vector<int> labels;  // row-major [i * n_v + j]; -1 outside the set
};

/// Flood fill (4-neighborhood in log coordinates) over the ordered grid nodes
/// with W <= c. Component count 0 means the sublevel misses the grid entirely.
ConnectivityResult grid_connectivity(const OrderedSVEnergy& e, double c, const DomainGrid& grid);

}  // namespace convexlab
