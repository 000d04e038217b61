#pragma once

#include <optional>
#include <string>
#include <vector>

#include "convexlab/energy.hpp"

namespace convexlab {

// ---- infimum of t^2 g''(t) ----------------------------------------------

struct InfimumGrid {
    double t_min = 1e-9;
    double t_max = 1e9;
    int samples = 3000;
    int refine_rounds = 2;
};

struct InfimumResult {
    double value = 0.0;    // numeric infimum over the refined grid
    double at_t = 0.0;     // argmin
    bool at_boundary = false;
    bool fd_limited = false;  // grid clipped to the finite-difference-reliable window
    std::optional<double> closed_form;
    bool agrees_with_closed_form = true;  // within 1e-6 when a closed form exists
};

/// Numeric infimum of t^2 g''(t) over a refined log-spaced grid on (0, inf).
/// Refuses functions that claim less than C2 smoothness.
InfimumResult infimum_t2_g2(const ScalarFn& g, const InfimumGrid& grid = {},
                            std::optional<double> closed_form = std::nullopt);

// ---- closed-form split criterion ------------------------------------------

struct ConditionReport {
    bool pass = false;
    double worst_margin = 0.0;
    double witness_t = 0.0;
    long first_disjunct_count = 0;   // points settled by the first disjunct
    long second_disjunct_count = 0;  // points needing the second one
};

struct SplitCriterionGrid {
    double t_min = 1e-3;
    double t_max = 1e3;
    int samples = 2000;
    double t1_exclusion = 1e-6;  // window around t = 1 skipped in condition iii
};

struct SplitCriterionReport {
    InfimumResult h0;
    InfimumResult f0;
    bool condition_i = false;
    double condition_i_margin = 0.0;
    ConditionReport condition_ii;
    ConditionReport condition_iii;
    ConditionReport condition_iv;
    bool f_unbounded_below = false;  // grid infimum of t^2 f'' diverges at the edge
    bool fd_derivatives = false;     // margins judged at the widened FD tolerance
    bool overall = false;
    std::vector<double> grid_t;              // evaluation nodes
    std::vector<double> iii_first_disjunct;  // first disjunct of iii per node (0 where skipped)
};

/// The four-condition rank-one convexity test for volumetric-isochorically
/// split energies, evaluated on a log-spaced grid with pass tolerance -1e-9
/// on all margins. h is the unordered isochoric extension.
SplitCriterionReport split_rank_one_criterion(const VolIsoSplitEnergy& e,
                                              const SplitCriterionGrid& grid = {},
                                              const InfimumGrid& inf_grid = {});

// ---- sampling checks ------------------------------------------------------

/// Central second difference of s -> W(F + sH) at s = t, H realized from d.
/// Throws std::domain_error naming the offending endpoint when the stencil
/// leaves GL+(2).
double rank_one_second_difference(const OrderedSVEnergy& e, const Mat2& f,
                                  const RankOneDir& d, double t, double step);

struct LineScanWitness {
    Mat2 base;
    RankOneDir direction;   // meaningful for rank-one scans
    Mat2 direction_matrix;  // realized H (rank-one) or G (convexity)
    double t = 0.0;
    double second_difference = 0.0;
    bool from_refinement = false;
};

struct RankOneScanGrid {
    // base points: ordered diagonal matrices diag(e^u, e^v), u >= v
    double u_min = -1.5, u_max = 1.5;
    int base_samples = 7;
    int theta_samples = 24;
    int phi_samples = 24;
    int t_samples = 5;
    double step_fraction = 0.02;       // FD step relative to the segment width
    double det_margin = 0.05;          // endpoints keep det >= margin * det(F)
    double span_cap = 4.0;             // segment half-width cap, times |||F|||
    double violation_threshold = -1e-6;
    int refine_iterations = 60;        // pattern-search budget from the worst sample
};

struct ScanResult {
    bool violation_found = false;
    std::optional<LineScanWitness> witness;
    double min_second_difference = 0.0;
    long samples = 0;
    std::string resolution;  // human-readable grid description
};

/// Grid sampler for rank-one convexity. A violation verdict is definitive;
/// "no violation found" is evidence at the stated resolution only.
ScanResult rank_one_scan(const OrderedSVEnergy& e, const RankOneScanGrid& grid = {});

/// Monte-Carlo variant over random admissible (F, H, t) triples, fixed seed.
ScanResult rank_one_monte_carlo(const OrderedSVEnergy& e, long n_samples,
                                unsigned seed = 917u, double threshold = -1e-6);

struct ConvexityScanGrid {
    // base points diag(p, +-q) with p >= q > 0 from a log grid
    double u_min = -1.0, u_max = 1.5;
    int base_samples = 7;
    int dir_samples = 12;              // per hyperspherical angle, 3 angles
    double fd_step = 5e-3;
    double violation_threshold = -1e-6;
    int refine_iterations = 60;
};

/// Convexity sampler along arbitrary (not only rank-one) directions, using
/// the unrestricted matrix form on all of R^{2x2}. Requires E.matrix_form.
ScanResult convexity_scan(const OrderedSVEnergy& e, const ConvexityScanGrid& grid = {});

}  // namespace convexlab
