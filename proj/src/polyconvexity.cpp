#include "convexlab/polyconvexity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "convexlab/kernels.hpp"
#include "convexlab/parallel.hpp"

namespace convexlab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

CInterval c_interval(const OrderedSVEnergy& e, double gamma1, double gamma2,
                     double sep_margin) {
    if (!(gamma2 > 0.0) || !(gamma1 >= gamma2)) {
        throw std::domain_error("c_interval: requires gamma1 >= gamma2 > 0");
    }
    if (!(gamma1 - gamma2 >= sep_margin)) {
        throw SeparationError("c_interval: gamma pair closer than the separation margin");
    }
    const auto [d1, d2] = ordered_partials(e, gamma1, gamma2);
    CInterval iv;
    iv.gamma1 = gamma1;
    iv.gamma2 = gamma2;
    iv.c_lo = -(d1 - d2) / (gamma1 - gamma2);
    iv.c_hi = (d1 + d2) / (gamma1 + gamma2);
    return iv;
}

double minorant_residual(const OrderedSVEnergy& e, double g1, double g2,
                         double n1, double n2, double c) {
    const double gv = eval_ordered(e, g1, g2);
    const double nv = eval_ordered(e, n1, n2);
    const auto [d1, d2] = ordered_partials(e, g1, g2);
    const double dx1 = n1 - g1, dx2 = n2 - g2;
    return nv - (gv + d1 * dx1 + d2 * dx2 + c * dx1 * dx2);
}

RequiredCBound required_c_bound(const OrderedSVEnergy& e, double g1, double g2,
                                double n1, double n2) {
    const double dx1 = n1 - g1, dx2 = n2 - g2;
    if (std::fabs(dx1) < 1e-12 * std::max({1.0, std::fabs(n1), std::fabs(g1)}) ||
        std::fabs(dx2) < 1e-12 * std::max({1.0, std::fabs(n2), std::fabs(g2)})) {
        throw std::domain_error("required_c_bound: degenerate cross term (nu_i == gamma_i)");
    }
    const double cross = dx1 * dx2;
    const double gv = eval_ordered(e, g1, g2);
    const double nv = eval_ordered(e, n1, n2);
    const auto [d1, d2] = ordered_partials(e, g1, g2);
    const double resid = nv - gv - d1 * dx1 - d2 * dx2;
    RequiredCBound b;
    b.threshold = resid / cross;
    b.orientation = cross > 0.0 ? BoundOrientation::upper : BoundOrientation::lower;
    return b;
}

SVGrid SVGrid::log_grid(double lo, double hi, int n, const std::vector<double>& required_nodes) {
    SVGrid g;
    g.axis.resize(n);
    const double a = std::log(lo), b = std::log(hi);
    for (int i = 0; i < n; ++i) g.axis[i] = std::exp(a + (b - a) * i / (n - 1));
    for (double r : required_nodes) {
        if (r < lo || r > hi) continue;
        std::size_t nearest = 0;
        double best = kInf;
        for (std::size_t i = 0; i < g.axis.size(); ++i) {
            const double d = std::fabs(std::log(g.axis[i]) - std::log(r));
            if (d < best) {
                best = d;
                nearest = i;
            }
        }
        g.axis[nearest] = r;
    }
    std::sort(g.axis.begin(), g.axis.end());
    g.axis.erase(std::unique(g.axis.begin(), g.axis.end()), g.axis.end());
    return g;
}

std::vector<std::pair<double, double>> SVGrid::ordered_pairs(double min_separation) const {
    std::vector<std::pair<double, double>> pairs;
    for (double a : axis) {
        for (double b : axis) {
            if (a >= b && a - b >= min_separation) pairs.emplace_back(a, b);
        }
    }
    std::sort(pairs.begin(), pairs.end());
    return pairs;
}

SVGrid default_gamma_grid() {
    const double e1 = std::exp(1.0);
    return SVGrid::log_grid(std::exp(-2.0), std::exp(5.0), 40,
                            {1.0, e1, std::exp(3.0), std::exp(4.0)});
}

SVGrid default_nu_grid() {
    const double e1 = std::exp(1.0);
    return SVGrid::log_grid(std::exp(-2.0), std::exp(3.0), 60, {1.0, e1, std::exp(3.0)});
}

FalsifyResult polyconvexity_falsify(const OrderedSVEnergy& e,
                                    const SVGrid& gamma_grid,
                                    const SVGrid& nu_grid,
                                    const FalsifyOptions& opt) {
    const auto gammas = gamma_grid.ordered_pairs(opt.sep_margin);
    const auto nus = nu_grid.ordered_pairs(0.0);

    std::vector<double> nu1(nus.size()), nu2(nus.size()), g_nu(nus.size());
    for (std::size_t i = 0; i < nus.size(); ++i) {
        nu1[i] = nus[i].first;
        nu2[i] = nus[i].second;
    }
    eval_batch(e, nu1.data(), nu2.data(), g_nu.data(), nus.size());

    enum class State { feasible, infeasible, skipped };
    struct PerGamma {
        State state = State::feasible;
        CInterval interval;
        double g_val = 0.0, d1 = 0.0, d2 = 0.0;
    };
    std::vector<PerGamma> per(gammas.size());

    parallel_for(gammas.size(), [&](std::size_t gi) {
        PerGamma& out = per[gi];
        const auto [g1, g2] = gammas[gi];
        try {
            out.interval = c_interval(e, g1, g2, opt.sep_margin);
            const auto [d1, d2] = ordered_partials(e, g1, g2);
            out.d1 = d1;
            out.d2 = d2;
            out.g_val = eval_ordered(e, g1, g2);
        } catch (const SeamError&) {
            out.state = State::skipped;
            return;
        } catch (const SeparationError&) {
            out.state = State::skipped;
            return;
        }
        const kernels::MinorantReduction red = kernels::minorant_reduce(
            g1, g2, out.g_val, out.d1, out.d2, nu1.data(), nu2.data(), g_nu.data(),
            nus.size(), opt.cross_tol);
        const double lo = std::max(out.interval.c_lo, red.lower_bound);
        const double hi = std::min(out.interval.c_hi, red.upper_bound);
        const bool zero_ok = red.min_zero_residual >= -opt.empty_tol;
        out.state = (lo <= hi + opt.empty_tol && zero_ok) ? State::feasible : State::infeasible;
    });

    FalsifyResult res;
    std::ostringstream desc;
    desc << gammas.size() << " gamma pairs x " << nus.size() << " nu pairs";
    res.resolution = desc.str();
    for (const PerGamma& pg : per) {
        if (pg.state == State::skipped) ++res.gammas_skipped;
        else ++res.gammas_checked;
    }

    for (std::size_t gi = 0; gi < gammas.size(); ++gi) {
        if (per[gi].state != State::infeasible) continue;
        const PerGamma& pg = per[gi];
        const auto [g1, g2] = gammas[gi];

        PolyWitness w;
        w.gamma1 = g1;
        w.gamma2 = g2;
        w.interval = pg.interval;

        // first nu in canonical order whose constraint alone empties the interval
        bool found_single = false;
        double best_upper = pg.interval.c_hi;
        std::size_t best_upper_at = nus.size();
        double best_lower = pg.interval.c_lo;
        std::size_t best_lower_at = nus.size();
        for (std::size_t ni = 0; ni < nus.size(); ++ni) {
            const double dx1 = nu1[ni] - g1;
            const double dx2 = nu2[ni] - g2;
            const double cross = dx1 * dx2;
            const double resid = g_nu[ni] - pg.g_val - pg.d1 * dx1 - pg.d2 * dx2;
            if (cross > opt.cross_tol) {
                const double theta = resid / cross;
                if (theta < best_upper) {
                    best_upper = theta;
                    best_upper_at = ni;
                }
                if (theta < pg.interval.c_lo - opt.empty_tol) {
                    w.nu1 = nu1[ni];
                    w.nu2 = nu2[ni];
                    w.required_bound = theta;
                    w.orientation = BoundOrientation::upper;
                    w.residual = pg.interval.c_lo - theta;
                    found_single = true;
                    break;
                }
            } else if (cross < -opt.cross_tol) {
                const double theta = resid / cross;
                if (theta > best_lower) {
                    best_lower = theta;
                    best_lower_at = ni;
                }
                if (theta > pg.interval.c_hi + opt.empty_tol) {
                    w.nu1 = nu1[ni];
                    w.nu2 = nu2[ni];
                    w.required_bound = theta;
                    w.orientation = BoundOrientation::lower;
                    w.residual = theta - pg.interval.c_hi;
                    found_single = true;
                    break;
                }
            } else if (resid < -opt.empty_tol) {
                w.nu1 = nu1[ni];
                w.nu2 = nu2[ni];
                w.required_bound = 0.0;
                w.orientation = BoundOrientation::upper;
                w.residual = -resid;
                found_single = true;
                break;
            }
        }
        if (!found_single) {
            // interval plus interval-endpoint constraints, or a two-nu pinch
            w.joint = true;
            w.residual = best_lower - best_upper;
            if (best_upper_at < nus.size()) {
                w.nu1 = nu1[best_upper_at];
                w.nu2 = nu2[best_upper_at];
                w.required_bound = best_upper;
                w.orientation = BoundOrientation::upper;
            }
            if (best_lower_at < nus.size()) {
                w.nu_other1 = nu1[best_lower_at];
                w.nu_other2 = nu2[best_lower_at];
            }
        }
        res.falsified = true;
        res.witness = w;
        break;
    }
    return res;
}

}  // namespace convexlab
