#pragma once

#include <optional>
#include <string>

#include "convexlab/energy.hpp"

namespace convexlab {

/// W0: hhat(t) = t - log t, f(t) = log t + 1/t, analytic first and second
/// derivatives attached; the unordered extension h is twice continuously
/// differentiable, and inf t^2 h'' = 1, inf t^2 f'' = -1 are registered.
VolIsoSplitEnergy w0_split();

/// (l1^4 + l2^4)/3 + l1^2 l2^2 / 2 - 2 (l1^3 l2 + l1 l2^3) / 3, with the
/// matrix form ||F||^4/3 - det^2/6 - 2 det ||F||^2 / 3 on all of R^{2x2}.
OrderedSVEnergy aubert();

/// (l1^2 + l2^2)^2 - 2 gamma (l1^2 + l2^2) l1 l2, with the matrix form
/// ||F||^2 (||F||^2 - 2 gamma det F) on all of R^{2x2}.
OrderedSVEnergy adm(double gamma);

/// l1 l2 for l1 <= 1, l1 + l2 - 1 for l1 >= 1; continuous across the declared
/// seam l1 = 1 and evaluable on all of R^{2x2} through singular values.
OrderedSVEnergy silhavy_energy();

/// Registry entry: ordered view plus the split form when the energy has one.
struct Energy {
    std::string name;
    OrderedSVEnergy ordered;
    std::optional<VolIsoSplitEnergy> split;
};

Energy make_w0();
Energy make_aubert();
Energy make_adm(double gamma);
Energy make_silhavy();

/// Resolve a CLI energy name: "w0", "aubert", "adm:<gamma>", "silhavy", or
/// "file:<path>" for an energy definition file. Analytic partials of the
/// built-ins are validated against finite differences on a coarse grid at
/// registration; a mismatch throws std::logic_error.
Energy lookup_energy(const std::string& spec);

}  // namespace convexlab
