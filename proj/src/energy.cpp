#include "convexlab/energy.hpp"

#include <cmath>

namespace convexlab {

namespace {

constexpr double kSeamBand = 1e-9;

double fd_step1(double t) { return 1e-5 * std::max(1.0, std::fabs(t)); }
double fd_step2(double t) { return 1e-4 * std::max(1.0, std::fabs(t)); }

}  // namespace

const char* smoothness_name(Smoothness s) {
    switch (s) {
        case Smoothness::c0: return "c0";
        case Smoothness::c1: return "c1";
        case Smoothness::c2: return "c2";
    }
    return "?";
}

std::vector<std::pair<double, double>> DomainGrid::ordered_points() const {
    std::vector<std::pair<double, double>> pts;
    pts.reserve(static_cast<std::size_t>(n_u) * n_v / 2 + n_u);
    for (int i = 0; i < n_u; ++i) {
        for (int j = 0; j < n_v; ++j) {
            if (ordered(i, j)) pts.emplace_back(std::exp(u(i)), std::exp(v(j)));
        }
    }
    return pts;
}

double fd_first(const std::function<double(double)>& g, double t) {
    const double d = fd_step1(t);
    return (g(t + d) - g(t - d)) / (2.0 * d);
}

double second_derivative_1d(const std::function<double(double)>& g, double t,
                            double step, double domain_min) {
    if (!(step > 0.0)) throw std::domain_error("second_derivative_1d: step must be positive");
    if (!(t - step > domain_min)) {
        throw std::domain_error("second_derivative_1d: point too close to the domain boundary");
    }
    return (g(t + step) - 2.0 * g(t) + g(t - step)) / (step * step);
}

double scalar_deriv(const ScalarFn& g, double t) {
    if (g.deriv) return g.deriv(t);
    const double d = fd_step1(t);
    if (t - d > g.domain_min) {
        return (g.value(t + d) - g.value(t - d)) / (2.0 * d);
    }
    // second-order forward stencil at the domain edge
    return (-3.0 * g.value(t) + 4.0 * g.value(t + d) - g.value(t + 2.0 * d)) / (2.0 * d);
}

double scalar_deriv2(const ScalarFn& g, double t) {
    if (g.deriv2) return g.deriv2(t);
    const double d = fd_step2(t);
    if (t - d > g.domain_min) {
        return (g.value(t + d) - 2.0 * g.value(t) + g.value(t - d)) / (d * d);
    }
    return (g.value(t) - 2.0 * g.value(t + d) + g.value(t + 2.0 * d)) / (d * d);
}

double eval_ordered(const OrderedSVEnergy& e, double l1, double l2) {
    if (!(l2 > 0.0) || !(l1 >= l2)) {
        throw std::domain_error("eval_ordered: requires l1 >= l2 > 0");
    }
    return e.value(l1, l2);
}

double eval_matrix(const OrderedSVEnergy& e, const Mat2& f) {
    if (!(f.det() > 0.0)) {
        throw std::domain_error("eval_matrix: requires det F > 0");
    }
    const OrderedSV sv = svd_ordered(f);
    return e.value(sv.lambda1, sv.lambda2);
}

OrderedSVEnergy split_to_ordered(const VolIsoSplitEnergy& e) {
    OrderedSVEnergy g;
    g.name = e.name;
    const ScalarFn hhat = e.isochoric;
    const ScalarFn f = e.volumetric;
    g.value = [hhat, f](double l1, double l2) {
        return hhat.value(l1 / l2) + f.value(l1 * l2);
    };
    if (hhat.deriv && f.deriv) {
        const auto hd = hhat.deriv;
        const auto fd = f.deriv;
        g.d1 = [hd, fd](double l1, double l2) {
            return hd(l1 / l2) / l2 + fd(l1 * l2) * l2;
        };
        g.d2 = [hd, fd](double l1, double l2) {
            return -hd(l1 / l2) * l1 / (l2 * l2) + fd(l1 * l2) * l1;
        };
    }
    g.smoothness = std::min(e.isochoric.smoothness, e.volumetric.smoothness);
    return g;
}

double unordered_h(const VolIsoSplitEnergy& e, double t) {
    if (!(t > 0.0)) throw std::domain_error("unordered_h: requires t > 0");
    return t >= 1.0 ? e.isochoric.value(t) : e.isochoric.value(1.0 / t);
}

double unordered_h_deriv(const VolIsoSplitEnergy& e, double t) {
    if (!(t > 0.0)) throw std::domain_error("unordered_h_deriv: requires t > 0");
    if (t >= 1.0) return scalar_deriv(e.isochoric, t);
    // h(t) = hhat(1/t)  =>  h'(t) = -hhat'(1/t) / t^2
    const double u = 1.0 / t;
    return -scalar_deriv(e.isochoric, u) * u * u;
}

double unordered_h_deriv2(const VolIsoSplitEnergy& e, double t) {
    if (!(t > 0.0)) throw std::domain_error("unordered_h_deriv2: requires t > 0");
    if (t >= 1.0) return scalar_deriv2(e.isochoric, t);
    // h''(t) = 2 hhat'(1/t) / t^3 + hhat''(1/t) / t^4
    const double u = 1.0 / t;
    return 2.0 * scalar_deriv(e.isochoric, u) * u * u * u +
           scalar_deriv2(e.isochoric, u) * u * u * u * u;
}

ScalarFn unordered_h_fn(const VolIsoSplitEnergy& e) {
    ScalarFn h;
    h.value = [e](double t) { return unordered_h(e, t); };
    h.deriv = [e](double t) { return unordered_h_deriv(e, t); };
    h.deriv2 = [e](double t) { return unordered_h_deriv2(e, t); };
    h.domain_min = 0.0;
    h.smoothness = e.isochoric.smoothness;
    h.numeric_derivs = e.isochoric.numeric_derivs;
    return h;
}

namespace {

std::pair<double, double> fd_partials(const OrderedSVEnergy& e, double l1, double l2) {
    const auto& g = e.value;
    double d1;
    {
        const double d = fd_step1(l1);
        if (l1 - d < l2) {
            d1 = (g(l1 + d, l2) - g(l1, l2)) / d;  // one-sided at the ordering boundary
        } else {
            d1 = (g(l1 + d, l2) - g(l1 - d, l2)) / (2.0 * d);
        }
    }
    double d2;
    {
        double d = fd_step1(l2);
        if (l2 - d <= 0.0) d = 0.5 * l2;
        if (l2 + d > l1) {
            d2 = (g(l1, l2) - g(l1, l2 - d)) / d;
        } else {
            d2 = (g(l1, l2 + d) - g(l1, l2 - d)) / (2.0 * d);
        }
    }
    return {d1, d2};
}

}  // namespace

std::pair<double, double> ordered_partials(const OrderedSVEnergy& e, double l1, double l2) {
    if (!(l2 > 0.0) || !(l1 >= l2)) {
        throw std::domain_error("ordered_partials: requires l1 >= l2 > 0");
    }
    if (e.seam_gap && std::fabs(e.seam_gap(l1, l2)) < kSeamBand) {
        const auto& g = e.value;
        const double s1 = fd_step1(l1), s2 = fd_step1(l2);
        const double d1_below = (g(l1, l2) - g(l1 - s1, l2)) / s1;
        const double d1_above = (g(l1 + s1, l2) - g(l1, l2)) / s1;
        const double d2_below = (g(l1, l2) - g(l1, l2 - s2)) / s2;
        const double d2_above = (g(l1, l2 + s2) - g(l1, l2)) / s2;
        throw SeamError("ordered_partials: point lies on a declared seam of " + e.name,
                        d1_below, d1_above, d2_below, d2_above);
    }
    if (e.d1 && e.d2) return {e.d1(l1, l2), e.d2(l1, l2)};
    return fd_partials(e, l1, l2);
}

void eval_batch(const OrderedSVEnergy& e, const double* l1, const double* l2,
                double* out, std::size_t n) {
    if (e.batch != nullptr) {
        e.batch(l1, l2, out, n, e.batch_param);
        return;
    }
    for (std::size_t i = 0; i < n; ++i) out[i] = e.value(l1[i], l2[i]);
}

PartialsValidation validate_partials(const OrderedSVEnergy& e, const DomainGrid& grid) {
    PartialsValidation result;
    if (!e.d1 || !e.d2) return result;  // nothing to validate
    const double seam_margin = 1e-3;
    for (int i = 1; i + 1 < grid.n_u; ++i) {
        for (int j = 1; j + 1 < grid.n_v; ++j) {
            if (!grid.ordered(i, j)) continue;
            const double l1 = std::exp(grid.u(i));
            const double l2 = std::exp(grid.v(j));
            if (l1 - l2 < 1e-3 * l1) continue;  // FD stencils must stay ordered
            if (e.seam_gap && std::fabs(e.seam_gap(l1, l2)) < seam_margin) continue;
            const auto [a1, a2] = std::pair{e.d1(l1, l2), e.d2(l1, l2)};
            const auto [f1, f2] = fd_partials(e, l1, l2);
            const double r1 = std::fabs(a1 - f1) / std::max(1.0, std::fabs(a1));
            const double r2 = std::fabs(a2 - f2) / std::max(1.0, std::fabs(a2));
            const double worst = std::max(r1, r2);
            if (worst > result.worst_rel) {
                result.worst_rel = worst;
                result.at_l1 = l1;
                result.at_l2 = l2;
            }
        }
    }
    result.ok = result.worst_rel <= 1e-6;
    return result;
}

}  // namespace convexlab
