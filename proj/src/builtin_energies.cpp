#include "convexlab/builtin_energies.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "convexlab/expr.hpp"
#include "convexlab/kernels.hpp"

namespace convexlab {

VolIsoSplitEnergy w0_split() {
    VolIsoSplitEnergy e;
    e.name = "w0";
    e.isochoric.value = [](double t) { return t - std::log(t); };
    e.isochoric.deriv = [](double t) { return 1.0 - 1.0 / t; };
    e.isochoric.deriv2 = [](double t) { return 1.0 / (t * t); };
    e.isochoric.domain_min = 1.0;
    e.isochoric.smoothness = Smoothness::c2;
    e.volumetric.value = [](double t) { return std::log(t) + 1.0 / t; };
    e.volumetric.deriv = [](double t) { return 1.0 / t - 1.0 / (t * t); };
    e.volumetric.deriv2 = [](double t) { return -1.0 / (t * t) + 2.0 / (t * t * t); };
    e.volumetric.domain_min = 0.0;
    e.volumetric.smoothness = Smoothness::c2;
    e.h0_closed_form = 1.0;
    e.f0_closed_form = -1.0;
    e.growth = GrowthFlags{true, true, true};
    return e;
}

OrderedSVEnergy aubert() {
    OrderedSVEnergy e;
    e.name = "aubert";
    e.value = [](double a, double b) {
        return (a * a * a * a + b * b * b * b) / 3.0 + 0.5 * a * a * b * b -
               (2.0 / 3.0) * (a * a * a * b + a * b * b * b);
    };
    e.d1 = [](double a, double b) {
        return (4.0 / 3.0) * a * a * a + a * b * b - 2.0 * a * a * b - (2.0 / 3.0) * b * b * b;
    };
    e.d2 = [](double a, double b) {
        return (4.0 / 3.0) * b * b * b + a * a * b - 2.0 * a * b * b - (2.0 / 3.0) * a * a * a;
    };
    e.smoothness = Smoothness::c2;
    e.matrix_form = [](const Mat2& f) {
        const double n2 = f.a11 * f.a11 + f.a12 * f.a12 + f.a21 * f.a21 + f.a22 * f.a22;
        const double det = f.det();
        return n2 * n2 / 3.0 - det * det / 6.0 - (2.0 / 3.0) * det * n2;
    };
    e.batch = &kernels::aubert_eval;
    return e;
}

namespace {

std::string adm_name(double gamma) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "adm:%g", gamma);
    return buf;
}

}  // namespace

OrderedSVEnergy adm(double gamma) {
    OrderedSVEnergy e;
    e.name = adm_name(gamma);
    e.value = [gamma](double a, double b) {
        const double s = a * a + b * b;
        return s * s - 2.0 * gamma * s * a * b;
    };
    e.d1 = [gamma](double a, double b) {
        return 4.0 * a * (a * a + b * b) - 2.0 * gamma * (3.0 * a * a * b + b * b * b);
    };
    e.d2 = [gamma](double a, double b) {
        return 4.0 * b * (a * a + b * b) - 2.0 * gamma * (a * a * a + 3.0 * a * b * b);
    };
    e.smoothness = Smoothness::c2;
    e.matrix_form = [gamma](const Mat2& f) {
        const double n2 = f.a11 * f.a11 + f.a12 * f.a12 + f.a21 * f.a21 + f.a22 * f.a22;
        return n2 * (n2 - 2.0 * gamma * f.det());
    };
    e.batch = &kernels::adm_eval;
    e.batch_param = gamma;
    return e;
}

OrderedSVEnergy silhavy_energy() {
    OrderedSVEnergy e;
    e.name = "silhavy";
    e.value = [](double a, double b) { return a <= 1.0 ? a * b : a + b - 1.0; };
    e.d1 = [](double a, double b) { return a <= 1.0 ? b : 1.0; };
    e.d2 = [](double a, double) { return a <= 1.0 ? a : 1.0; };
    e.smoothness = Smoothness::c0;
    e.seam_gap = [](double a, double) { return a - 1.0; };
    e.matrix_form = [](const Mat2& f) {
        const OrderedSV sv = svd_ordered(f);
        return sv.lambda1 <= 1.0 ? sv.lambda1 * sv.lambda2 : sv.lambda1 + sv.lambda2 - 1.0;
    };
    e.batch = &kernels::silhavy_eval;
    return e;
}

namespace {

void validate_or_throw(const Energy& e) {
    DomainGrid coarse;
    coarse.n_u = 21;
    coarse.n_v = 21;
    const PartialsValidation v = validate_partials(e.ordered, coarse);
    if (!v.ok) {
        throw std::logic_error("analytic partials of " + e.name +
                               " disagree with finite differences (rel " +
                               std::to_string(v.worst_rel) + ")");
    }
}

}  // namespace

Energy make_w0() {
    Energy e;
    e.name = "w0";
    e.split = w0_split();
    e.ordered = split_to_ordered(*e.split);
    e.ordered.batch = &kernels::w0_eval;
    validate_or_throw(e);
    return e;
}

Energy make_aubert() {
    Energy e;
    e.name = "aubert";
    e.ordered = aubert();
    validate_or_throw(e);
    return e;
}

Energy make_adm(double gamma) {
    Energy e;
    e.name = adm_name(gamma);
    e.ordered = adm(gamma);
    validate_or_throw(e);
    return e;
}

Energy make_silhavy() {
    Energy e;
    e.name = "silhavy";
    e.ordered = silhavy_energy();
    validate_or_throw(e);
    return e;
}

Energy lookup_energy(const std::string& spec) {
    if (spec == "w0") return make_w0();
    if (spec == "aubert") return make_aubert();
    if (spec == "silhavy") return make_silhavy();
    if (spec.rfind("adm:", 0) == 0) {
        const std::string arg = spec.substr(4);
        std::size_t used = 0;
        double gamma = 0.0;
        try {
            gamma = std::stod(arg, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("invalid ADM gamma: '" + arg + "'");
        }
        if (used != arg.size()) {
            throw std::invalid_argument("invalid ADM gamma: '" + arg + "'");
        }
        return make_adm(gamma);
    }
    if (spec.rfind("file:", 0) == 0) {
        Energy e;
        e.split = split_energy_from_file(load_energy_file(spec.substr(5)));
        e.name = e.split->name;
        e.ordered = split_to_ordered(*e.split);
        return e;
    }
    throw std::invalid_argument("unknown energy '" + spec +
                                "' (expected w0 | aubert | adm:<gamma> | silhavy | file:<path>)");
}

}  // namespace convexlab
