#include "convexlab/rank_one.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <sstream>

#include "convexlab/parallel.hpp"

namespace convexlab {

namespace {

constexpr double kMarginTol = -1e-9;
constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> log_spaced(double lo, double hi, int n) {
    std::vector<double> out(n);
    const double a = std::log(lo), b = std::log(hi);
    for (int i = 0; i < n; ++i) {
        out[i] = std::exp(a + (b - a) * i / (n - 1));
    }
    return out;
}

// Deterministic compass search; minimizes obj, returns best value, x updated.
double pattern_search(std::vector<double>& x, std::vector<double> step,
                      const std::vector<std::pair<double, double>>& bounds,
                      int iterations,
                      const std::function<double(const std::vector<double>&)>& obj) {
    double best = obj(x);
    for (int it = 0; it < iterations; ++it) {
        bool improved = false;
        for (std::size_t k = 0; k < x.size(); ++k) {
            for (const double sign : {+1.0, -1.0}) {
                std::vector<double> y = x;
                y[k] = std::clamp(y[k] + sign * step[k], bounds[k].first, bounds[k].second);
                const double v = obj(y);
                if (v < best) {
                    best = v;
                    x = y;
                    improved = true;
                }
            }
        }
        if (!improved) {
            for (auto& s : step) s *= 0.5;
        }
    }
    return best;
}

}  // namespace

InfimumResult infimum_t2_g2(const ScalarFn& g, const InfimumGrid& grid,
                            std::optional<double> closed_form) {
    if (g.smoothness != Smoothness::c2) {
        throw RefusalError("infimum_t2_g2: the function does not claim C2 smoothness");
    }
    InfimumResult r;
    r.closed_form = closed_form;

    auto objective = [&g](double t) { return t * t * scalar_deriv2(g, t); };

    double lo = grid.t_min, hi = grid.t_max;
    if (g.numeric_derivs) {
        // outside this window a second difference of values O(t) or O(1/t)
        // is dominated by rounding and t^2 g'' is meaningless
        lo = std::max(lo, 1e-4);
        hi = std::min(hi, 1e4);
        r.fd_limited = lo > grid.t_min || hi < grid.t_max;
    }
    const double edge_lo = lo, edge_hi = hi;
    int best_idx = 0;
    std::vector<double> ts;
    for (int round = 0; round <= grid.refine_rounds; ++round) {
        ts = log_spaced(lo, hi, grid.samples);
        best_idx = 0;
        double best = kInf;
        for (int i = 0; i < grid.samples; ++i) {
            const double v = objective(ts[i]);
            if (v < best) {
                best = v;
                best_idx = i;
            }
        }
        r.value = best;
        r.at_t = ts[best_idx];
        const bool at_global_edge =
            (best_idx == 0 && lo <= edge_lo * (1 + 1e-12)) ||
            (best_idx == grid.samples - 1 && hi >= edge_hi * (1 - 1e-12));
        r.at_boundary = at_global_edge;
        if (at_global_edge || round == grid.refine_rounds) break;
        lo = ts[std::max(0, best_idx - 1)];
        hi = ts[std::min(grid.samples - 1, best_idx + 1)];
    }

    if (closed_form.has_value()) {
        r.agrees_with_closed_form =
            std::fabs(r.value - *closed_form) <= 1e-6 * std::max(1.0, std::fabs(*closed_form));
    }
    return r;
}

SplitCriterionReport split_rank_one_criterion(const VolIsoSplitEnergy& e,
                                              const SplitCriterionGrid& grid,
                                              const InfimumGrid& inf_grid) {
    if (e.isochoric.smoothness != Smoothness::c2 || e.volumetric.smoothness != Smoothness::c2) {
        throw RefusalError("split_rank_one_criterion: " + e.name + " does not claim C2 components");
    }

    SplitCriterionReport rep;
    const ScalarFn h = unordered_h_fn(e);
    rep.fd_derivatives = e.isochoric.numeric_derivs || e.volumetric.numeric_derivs;
    rep.h0 = infimum_t2_g2(h, inf_grid, e.h0_closed_form);
    rep.f0 = infimum_t2_g2(e.volumetric, inf_grid, e.f0_closed_form);
    if (!rep.h0.agrees_with_closed_form || !rep.f0.agrees_with_closed_form) {
        throw std::logic_error("split_rank_one_criterion: numeric infimum disagrees with the "
                               "registered closed form for " + e.name);
    }
    rep.f_unbounded_below = rep.f0.at_boundary && rep.f0.value < -1e6;

    const double h0 = rep.h0.closed_form.value_or(rep.h0.value);
    const double f0 = rep.f0.closed_form.value_or(rep.f0.value);

    // FD-backed derivatives carry a noise floor proportional to the term
    // magnitudes; margins are judged against it instead of the strict -1e-9
    const double fd_rel = rep.fd_derivatives ? 3e-3 : 0.0;

    rep.condition_i_margin = h0 + f0;
    rep.condition_i =
        rep.condition_i_margin >= kMarginTol - fd_rel * std::max({1.0, std::fabs(h0), std::fabs(f0)}) &&
        !rep.f_unbounded_below;

    rep.grid_t = log_spaced(grid.t_min, grid.t_max, grid.samples);
    rep.iii_first_disjunct.assign(rep.grid_t.size(), std::numeric_limits<double>::quiet_NaN());

    auto eval_abc = [&](double t, double hp, double hpp, double& a, double& b, double& c) {
        a = t * t * (t * t - 1.0) * hp * hpp - 2.0 * t * hp * hp;
        b = (t * t + 3.0) * hp + 2.0 * t * (t * t + 1.0) * hpp;
        c = 4.0 * t * (hp + t * hpp);
    };

    ConditionReport ii, iii, iv;
    ii.pass = iii.pass = iv.pass = true;
    ii.worst_margin = iii.worst_margin = iv.worst_margin = kInf;

    auto update = [fd_rel](ConditionReport& cr, double margin, double t, double scale) {
        if (margin < cr.worst_margin) {
            cr.worst_margin = margin;
            cr.witness_t = t;
        }
        if (margin < kMarginTol - fd_rel * scale) cr.pass = false;
    };

    auto term_scale = [&](double t, double hp, double hpp, double denom) {
        return std::max({1.0, std::fabs(2.0 * t / denom * hp), std::fabs(t * t * hpp),
                         std::fabs(f0)});
    };

    auto check_iv_at = [&](double t) {
        const double hp = unordered_h_deriv(e, t);
        const double hpp = unordered_h_deriv2(e, t);
        double a, b, c;
        eval_abc(t, hp, hpp, a, b, c);
        const double d1 = (2.0 * t / (t + 1.0)) * hp + t * t * hpp - f0;
        const double d2 = a + (b + c) * f0;
        if (d1 >= kMarginTol) ++iv.first_disjunct_count; else ++iv.second_disjunct_count;
        update(iv, std::max(d1, d2), t, term_scale(t, hp, hpp, t + 1.0));
    };

    for (std::size_t i = 0; i < rep.grid_t.size(); ++i) {
        const double t = rep.grid_t[i];
        const double hp = unordered_h_deriv(e, t);
        const double hpp = unordered_h_deriv2(e, t);

        if (t >= 1.0) update(ii, hp, t, std::max(1.0, std::fabs(hp)));

        if (std::fabs(t - 1.0) > grid.t1_exclusion) {
            double a, b, c;
            eval_abc(t, hp, hpp, a, b, c);
            const double d1 = (2.0 * t / (t - 1.0)) * hp - t * t * hpp + f0;
            const double d2 = a + (b - c) * f0;
            rep.iii_first_disjunct[i] = d1;
            if (d1 >= kMarginTol) ++iii.first_disjunct_count; else ++iii.second_disjunct_count;
            update(iii, std::max(d1, d2), t, term_scale(t, hp, hpp, t - 1.0));
        }

        check_iv_at(t);
    }
    check_iv_at(1.0);  // the t -> 1 limit is covered by condition iv directly

    rep.condition_ii = ii;
    rep.condition_iii = iii;
    rep.condition_iv = iv;
    rep.overall = rep.condition_i && ii.pass && iii.pass && iv.pass;
    return rep;
}

double rank_one_second_difference(const OrderedSVEnergy& e, const Mat2& f,
                                  const RankOneDir& d, double t, double step) {
    if (!(step > 0.0)) throw std::domain_error("rank_one_second_difference: step must be positive");
    const Mat2 h = rank_one_matrix(d);
    double w[3];
    const double ss[3] = {t - step, t, t + step};
    for (int i = 0; i < 3; ++i) {
        const Mat2 g = f + ss[i] * h;
        if (!(g.det() > 0.0)) {
            std::ostringstream msg;
            msg << "rank_one_second_difference: segment leaves GL+(2) at s = " << ss[i];
            throw std::domain_error(msg.str());
        }
        w[i] = eval_matrix(e, g);
    }
    return (w[2] - 2.0 * w[1] + w[0]) / (step * step);
}

namespace {

struct Segment {
    double lo = 0.0, hi = 0.0;
    bool ok = false;
};

// Admissible parameter range along F + s H: det is affine in s for rank-one H.
Segment admissible_segment(const Mat2& f, const Mat2& h, double det_margin, double span_cap) {
    Segment seg;
    const double d0 = f.det();
    if (!(d0 > 0.0)) return seg;
    const double c1 = inner(f.cofactor(), h);
    const double cap = span_cap * f.frobenius_norm();
    double lo = -cap, hi = cap;
    if (std::fabs(c1) > 1e-14 * d0) {
        const double s_edge = -d0 * (1.0 - det_margin) / c1;
        if (c1 > 0.0) lo = std::max(lo, s_edge);
        else hi = std::min(hi, s_edge);
    }
    if (hi - lo < 0.05) return seg;  // too short to carry a meaningful stencil
    seg.lo = lo;
    seg.hi = hi;
    seg.ok = true;
    return seg;
}

double scan_step(double width, double fraction) {
    return std::max(fraction * width, 1e-3);
}

}  // namespace

ScanResult rank_one_scan(const OrderedSVEnergy& e, const RankOneScanGrid& grid) {
    std::vector<std::pair<double, double>> bases;  // (u, v) with u >= v
    for (int i = 0; i < grid.base_samples; ++i) {
        for (int j = 0; j <= i; ++j) {
            const double u = grid.u_min + (grid.u_max - grid.u_min) * i / (grid.base_samples - 1);
            const double v = grid.u_min + (grid.u_max - grid.u_min) * j / (grid.base_samples - 1);
            bases.emplace_back(u, v);
        }
    }

    struct PerBase {
        bool found = false;
        LineScanWitness witness;
        double min_value = kInf;
        LineScanWitness min_at;
        long samples = 0;
    };
    std::vector<PerBase> results(bases.size());

    auto run_base = [&](std::size_t bi) {
        PerBase& out = results[bi];
        const Mat2 f = Mat2::diag(std::exp(bases[bi].first), std::exp(bases[bi].second));
        for (int a = 0; a < grid.theta_samples && !out.found; ++a) {
            const double theta = M_PI * a / grid.theta_samples;
            for (int b = 0; b < grid.phi_samples && !out.found; ++b) {
                const double phi = M_PI * b / grid.phi_samples;
                const RankOneDir dir{theta, phi, 1.0};
                const Mat2 h = rank_one_matrix(dir);
                const Segment seg = admissible_segment(f, h, grid.det_margin, grid.span_cap);
                if (!seg.ok) continue;
                const double width = seg.hi - seg.lo;
                const double step = scan_step(width, grid.step_fraction);
                for (int k = 0; k < grid.t_samples; ++k) {
                    const double t = seg.lo + width * (k + 1.0) / (grid.t_samples + 1.0);
                    if (t - step < seg.lo || t + step > seg.hi) continue;
                    const double sd = rank_one_second_difference(e, f, dir, t, step);
                    ++out.samples;
                    if (sd < out.min_value) {
                        out.min_value = sd;
                        out.min_at = LineScanWitness{f, dir, h, t, sd, false};
                    }
                    if (sd < grid.violation_threshold) {
                        out.found = true;
                        out.witness = LineScanWitness{f, dir, h, t, sd, false};
                        break;
                    }
                }
            }
        }
    };
    parallel_for(bases.size(), run_base);

    ScanResult res;
    std::ostringstream desc;
    desc << bases.size() << " base points x " << grid.theta_samples << "x" << grid.phi_samples
         << " directions x " << grid.t_samples << " positions";
    res.resolution = desc.str();
    res.min_second_difference = kInf;
    for (const PerBase& pb : results) {
        res.samples += pb.samples;
        if (pb.min_value < res.min_second_difference) {
            res.min_second_difference = pb.min_value;
        }
    }
    for (const PerBase& pb : results) {
        if (pb.found) {
            res.violation_found = true;
            res.witness = pb.witness;
            return res;
        }
    }

    // No grid violation: polish the worst sample with a local compass search.
    if (grid.refine_iterations > 0) {
        const PerBase* worst = nullptr;
        for (const PerBase& pb : results) {
            if (pb.samples > 0 && (worst == nullptr || pb.min_value < worst->min_value)) {
                worst = &pb;
            }
        }
        if (worst != nullptr) {
            auto objective = [&](const std::vector<double>& x) {
                const Mat2 f = Mat2::diag(std::exp(x[0]), std::exp(x[1]));
                const RankOneDir dir{x[2], x[3], 1.0};
                const Mat2 h = rank_one_matrix(dir);
                const Segment seg = admissible_segment(f, h, grid.det_margin, grid.span_cap);
                if (!seg.ok) return kInf;
                const double width = seg.hi - seg.lo;
                const double step = scan_step(width, grid.step_fraction);
                const double t = seg.lo + std::clamp(x[4], 0.02, 0.98) * width;
                if (t - step < seg.lo || t + step > seg.hi) return kInf;
                return rank_one_second_difference(e, f, dir, t, step);
            };
            const OrderedSV sv = svd_ordered(worst->min_at.base);
            const Segment seg0 = admissible_segment(
                worst->min_at.base, rank_one_matrix(worst->min_at.direction),
                grid.det_margin, grid.span_cap);
            std::vector<double> x = {std::log(sv.lambda1), std::log(sv.lambda2),
                                     worst->min_at.direction.left_angle,
                                     worst->min_at.direction.right_angle,
                                     seg0.ok ? (worst->min_at.t - seg0.lo) / (seg0.hi - seg0.lo) : 0.5};
            const std::vector<double> step0 = {0.2, 0.2, 0.1, 0.1, 0.1};
            const std::vector<std::pair<double, double>> bounds = {
                {grid.u_min - 1.0, grid.u_max + 1.0}, {grid.u_min - 1.0, grid.u_max + 1.0},
                {-0.5, M_PI + 0.5}, {-0.5, M_PI + 0.5}, {0.02, 0.98}};
            const double refined = pattern_search(x, step0, bounds, grid.refine_iterations, objective);
            if (refined < res.min_second_difference) res.min_second_difference = refined;
            if (refined < grid.violation_threshold) {
                const Mat2 f = Mat2::diag(std::exp(x[0]), std::exp(x[1]));
                const RankOneDir dir{x[2], x[3], 1.0};
                const Segment seg = admissible_segment(f, rank_one_matrix(dir),
                                                       grid.det_margin, grid.span_cap);
                const double t = seg.lo + std::clamp(x[4], 0.02, 0.98) * (seg.hi - seg.lo);
                res.violation_found = true;
                res.witness = LineScanWitness{f, dir, rank_one_matrix(dir), t, refined, true};
            }
        }
    }
    return res;
}

ScanResult rank_one_monte_carlo(const OrderedSVEnergy& e, long n_samples,
                                unsigned seed, double threshold) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> entry(-2.0, 2.0);
    std::uniform_real_distribution<double> angle(0.0, M_PI);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    ScanResult res;
    res.min_second_difference = kInf;
    res.resolution = std::to_string(n_samples) + " random (F, H, t) triples, seed " +
                     std::to_string(seed);
    long produced = 0;
    while (produced < n_samples) {
        const Mat2 f(entry(rng), entry(rng), entry(rng), entry(rng));
        if (!(f.det() > 0.05)) continue;
        const RankOneDir dir{angle(rng), angle(rng), std::exp(unit(rng) * 2.0 - 1.0)};
        const Mat2 h = rank_one_matrix(dir);
        const Segment seg = admissible_segment(f, h, 0.05, 4.0);
        if (!seg.ok) continue;
        const double width = seg.hi - seg.lo;
        const double step = scan_step(width, 0.02);
        const double t = seg.lo + (0.05 + 0.9 * unit(rng)) * width;
        if (t - step < seg.lo || t + step > seg.hi) continue;
        const double sd = rank_one_second_difference(e, f, dir, t, step);
        ++produced;
        ++res.samples;
        if (sd < res.min_second_difference) {
            res.min_second_difference = sd;
            if (sd < threshold && !res.violation_found) {
                res.violation_found = true;
                res.witness = LineScanWitness{f, dir, h, t, sd, false};
            }
        }
    }
    return res;
}

ScanResult convexity_scan(const OrderedSVEnergy& e, const ConvexityScanGrid& grid) {
    if (!e.matrix_form) {
        throw PreconditionError("convexity_scan: " + e.name +
                                " has no unrestricted matrix form");
    }
    const auto& w = e.matrix_form;

    std::vector<Mat2> bases;
    for (int i = 0; i < grid.base_samples; ++i) {
        for (int j = 0; j <= i; ++j) {
            const double p = std::exp(grid.u_min + (grid.u_max - grid.u_min) * i /
                                      (grid.base_samples - 1));
            const double q = std::exp(grid.u_min + (grid.u_max - grid.u_min) * j /
                                      (grid.base_samples - 1));
            bases.push_back(Mat2::diag(p, q));
            bases.push_back(Mat2::diag(p, -q));
        }
    }

    auto second_diff = [&](const Mat2& f, const Mat2& g, double step) {
        return (w(f + step * g) - 2.0 * w(f) + w(f - step * g)) / (step * step);
    };

    // Second-difference Hessian of the matrix form at F, then its smallest
    // eigenpair: the eigenvector is the worst-case direction, and the verdict
    // is confirmed by a direct second difference along it.
    struct Probe {
        double value = kInf;  // second difference along the worst direction
        Mat2 direction;
        long samples = 0;
    };
    auto probe_base = [&](const Mat2& f) {
        Probe pr;
        const double delta = grid.fd_step * (1.0 + f.frobenius_norm());
        const Mat2 basis[4] = {Mat2(1, 0, 0, 0), Mat2(0, 1, 0, 0),
                               Mat2(0, 0, 1, 0), Mat2(0, 0, 0, 1)};
        double hess[4][4];
        const double w0 = w(f);
        for (int i = 0; i < 4; ++i) {
            hess[i][i] = (w(f + delta * basis[i]) - 2.0 * w0 + w(f - delta * basis[i])) /
                         (delta * delta);
            pr.samples += 2;
        }
        for (int i = 0; i < 4; ++i) {
            for (int j = i + 1; j < 4; ++j) {
                const Mat2 ei = delta * basis[i], ej = delta * basis[j];
                hess[i][j] = hess[j][i] =
                    (w(f + ei + ej) - w(f + ei - ej) - w(f - ei + ej) + w(f - ei - ej)) /
                    (4.0 * delta * delta);
                pr.samples += 4;
            }
        }
        // cyclic Jacobi on the symmetric 4x4
        double v[4][4] = {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
        for (int sweep = 0; sweep < 30; ++sweep) {
            double off = 0.0;
            for (int i = 0; i < 4; ++i)
                for (int j = i + 1; j < 4; ++j) off += hess[i][j] * hess[i][j];
            if (off < 1e-24) break;
            for (int i = 0; i < 4; ++i) {
                for (int j = i + 1; j < 4; ++j) {
                    if (std::fabs(hess[i][j]) < 1e-300) continue;
                    const double phi = 0.5 * std::atan2(2.0 * hess[i][j], hess[i][i] - hess[j][j]);
                    const double c = std::cos(phi), s = std::sin(phi);
                    for (int k = 0; k < 4; ++k) {
                        const double hik = hess[i][k], hjk = hess[j][k];
                        hess[i][k] = c * hik + s * hjk;
                        hess[j][k] = -s * hik + c * hjk;
                    }
                    for (int k = 0; k < 4; ++k) {
                        const double hki = hess[k][i], hkj = hess[k][j];
                        hess[k][i] = c * hki + s * hkj;
                        hess[k][j] = -s * hki + c * hkj;
                        const double vki = v[k][i], vkj = v[k][j];
                        v[k][i] = c * vki + s * vkj;
                        v[k][j] = -s * vki + c * vkj;
                    }
                }
            }
        }
        int argmin = 0;
        for (int i = 1; i < 4; ++i) {
            if (hess[i][i] < hess[argmin][argmin]) argmin = i;
        }
        pr.direction = Mat2(v[0][argmin], v[1][argmin], v[2][argmin], v[3][argmin]);
        pr.value = second_diff(f, pr.direction, delta);
        pr.samples += 2;
        return pr;
    };

    std::vector<Probe> results(bases.size());
    parallel_for(bases.size(), [&](std::size_t bi) { results[bi] = probe_base(bases[bi]); });

    ScanResult res;
    std::ostringstream desc;
    desc << bases.size() << " base points, worst Hessian eigendirection each";
    res.resolution = desc.str();
    res.min_second_difference = kInf;
    std::size_t worst_idx = 0;
    for (std::size_t bi = 0; bi < bases.size(); ++bi) {
        res.samples += results[bi].samples;
        if (results[bi].value < res.min_second_difference) {
            res.min_second_difference = results[bi].value;
            worst_idx = bi;
        }
    }
    for (std::size_t bi = 0; bi < bases.size(); ++bi) {
        if (results[bi].value < grid.violation_threshold) {
            res.violation_found = true;
            res.witness = LineScanWitness{bases[bi], RankOneDir{}, results[bi].direction, 0.0,
                                          results[bi].value, false};
            return res;
        }
    }

    // Refine the base point along (u, v) from the worst sample.
    if (grid.refine_iterations > 0 && !bases.empty()) {
        const double sgn = bases[worst_idx].a22 < 0.0 ? -1.0 : 1.0;
        auto objective = [&](const std::vector<double>& x) {
            return probe_base(Mat2::diag(std::exp(x[0]), sgn * std::exp(x[1]))).value;
        };
        std::vector<double> x = {std::log(std::fabs(bases[worst_idx].a11)),
                                 std::log(std::fabs(bases[worst_idx].a22))};
        const std::vector<double> step0 = {0.2, 0.2};
        const std::vector<std::pair<double, double>> bounds = {
            {grid.u_min - 1.0, grid.u_max + 1.0}, {grid.u_min - 1.0, grid.u_max + 1.0}};
        const double refined = pattern_search(x, step0, bounds, grid.refine_iterations, objective);
        if (refined < res.min_second_difference) res.min_second_difference = refined;
        if (refined < grid.violation_threshold) {
            const Mat2 f = Mat2::diag(std::exp(x[0]), sgn * std::exp(x[1]));
            const Probe pr = probe_base(f);
            res.violation_found = true;
            res.witness = LineScanWitness{f, RankOneDir{}, pr.direction, 0.0, pr.value, true};
        }
    }
    return res;
}

}  // namespace convexlab
