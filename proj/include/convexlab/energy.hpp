#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "convexlab/kernels.hpp"
#include "convexlab/mat2.hpp"

namespace convexlab {

enum class Smoothness { c0, c1, c2 };

const char* smoothness_name(Smoothness s);

/// Thrown when a derivative is requested on a declared seam. Carries the
/// one-sided partials from both sides of the seam.
class SeamError : public std::domain_error {
public:
    SeamError(const std::string& what, double d1_below, double d1_above,
              double d2_below, double d2_above)
        : std::domain_error(what),
          d1_below(d1_below), d1_above(d1_above),
          d2_below(d2_below), d2_above(d2_above) {}
    double d1_below, d1_above, d2_below, d2_above;
};

/// Thrown by criteria that need a separated singular-value pair.
class SeparationError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown when an operation needs more smoothness than the energy claims.
class RefusalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// One-dimensional energy component with optional analytic derivatives.
/// domain_min is the (open) lower bound of the domain.
struct ScalarFn {
    std::function<double(double)> value;
    std::function<double(double)> deriv;
    std::function<double(double)> deriv2;
    double domain_min = 0.0;
    Smoothness smoothness = Smoothness::c2;
    /// True when derivative access falls back to finite differences; criteria
    /// then widen their tolerances to the FD noise floor.
    bool numeric_derivs = false;
};

/// Energy in ordered-singular-value form g(l1, l2) on {l1 >= l2 > 0}.
struct OrderedSVEnergy {
    std::string name;
    std::function<double(double, double)> value;
    std::function<double(double, double)> d1;  // optional analytic partials
    std::function<double(double, double)> d2;
    Smoothness smoothness = Smoothness::c2;
    /// Signed distance to the locus of non-smoothness, or null when smooth.
    std::function<double(double, double)> seam_gap;
    /// Full-matrix formula on all of R^{2x2}, when the energy extends there.
    std::function<double(const Mat2&)> matrix_form;
    /// Batch kernel hook for grid sweeps (null -> scalar loop over `value`).
    kernels::BatchEvalFn batch = nullptr;
    double batch_param = 0.0;
};

struct GrowthFlags {
    bool h_at_inf = false;  // hhat(t) -> inf as t -> inf
    bool f_at_inf = false;  // f(t) -> inf as t -> inf
    bool f_at_zero = false; // f(t) -> inf as t -> 0
};

/// Energy in volumetric-isochoric split form W = hhat(K(F)) + f(det F),
/// with hhat on [1, inf) and f on (0, inf).
struct VolIsoSplitEnergy {
    std::string name;
    ScalarFn isochoric;   // hhat
    ScalarFn volumetric;  // f
    std::optional<double> h0_closed_form;  // inf t^2 h''(t), when known
    std::optional<double> f0_closed_form;  // inf t^2 f''(t), when known
    std::optional<GrowthFlags> growth;
};

/// Rectangular grid in log coordinates u = ln(l1), v = ln(l2). Points with
/// u >= v realize the ordered domain.
struct DomainGrid {
    double u_min = -3.0, u_max = 3.0;
    double v_min = -3.0, v_max = 3.0;
    int n_u = 121, n_v = 121;

    double u(int i) const { return n_u < 2 ? u_min : u_min + (u_max - u_min) * i / (n_u - 1); }
    double v(int j) const { return n_v < 2 ? v_min : v_min + (v_max - v_min) * j / (n_v - 1); }
    bool ordered(int i, int j) const { return u(i) >= v(j); }

    /// All realized ordered points (l1, l2) with l1 >= l2 > 0.
    std::vector<std::pair<double, double>> ordered_points() const;
};

// ---- finite differences ------------------------------------------------

/// Central first difference, step 1e-5 * max(1, |t|).
double fd_first(const std::function<double(double)>& g, double t);

/// Central second difference (g(t+d) - 2 g(t) + g(t-d)) / d^2. The point must
/// be interior to (domain_min, inf) with margin >= step.
double second_derivative_1d(const std::function<double(double)>& g, double t,
                            double step, double domain_min = 0.0);

/// First derivative of a ScalarFn: analytic when present, else central
/// differences with step 1e-5 * max(1, |t|) clamped into the domain.
double scalar_deriv(const ScalarFn& g, double t);

/// Second derivative: analytic when present, else central differences with
/// step 1e-4 * max(1, |t|) clamped into the domain.
double scalar_deriv2(const ScalarFn& g, double t);

// ---- operations --------------------------------------------------------

/// g at an ordered pair; checks l1 >= l2 > 0.
double eval_ordered(const OrderedSVEnergy& e, double l1, double l2);

/// W(F) = g(ordered singular values of F). Requires det F > 0.
double eval_matrix(const OrderedSVEnergy& e, const Mat2& f);

/// Ordered view g(l1, l2) = hhat(l1/l2) + f(l1*l2), with chain-rule partials
/// when both components carry analytic first derivatives.
OrderedSVEnergy split_to_ordered(const VolIsoSplitEnergy& e);

/// Unordered isochoric extension h(t) = hhat(t) for t >= 1, hhat(1/t) below.
double unordered_h(const VolIsoSplitEnergy& e, double t);
double unordered_h_deriv(const VolIsoSplitEnergy& e, double t);
double unordered_h_deriv2(const VolIsoSplitEnergy& e, double t);

/// The unordered extension packaged as a ScalarFn on (0, inf), derivatives
/// wired through the reflection formulas.
ScalarFn unordered_h_fn(const VolIsoSplitEnergy& e);

/// Partials of g at an ordered pair: analytic when supplied, else central
/// differences. Points within 1e-9 of a declared seam raise SeamError with
/// one-sided values attached.
std::pair<double, double> ordered_partials(const OrderedSVEnergy& e, double l1, double l2);

/// Batch evaluation over ordered pairs, through the kernel hook when present.
void eval_batch(const OrderedSVEnergy& e, const double* l1, const double* l2,
                double* out, std::size_t n);

// ---- registration validation -------------------------------------------

struct PartialsValidation {
    bool ok = true;
    double worst_rel = 0.0;
    double at_l1 = 0.0, at_l2 = 0.0;
};

/// Compare analytic partials against central differences on the interior of
/// the grid, skipping a band around any declared seam. Passing threshold is
/// 1e-6 relative (relative to max(1, |analytic|)).
PartialsValidation validate_partials(const OrderedSVEnergy& e, const DomainGrid& grid);

}  // namespace convexlab
