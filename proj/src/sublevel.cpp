#include "convexlab/sublevel.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>

namespace convexlab {

namespace {

constexpr double kPathTol = 1e-9;
constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

GrowthVerdict growth_check(const std::function<double(double)>& g, GrowthDirection dir,
                           const GrowthCheckOptions& opt) {
    GrowthVerdict out;
    std::vector<double> ts(opt.decades), vs(opt.decades);
    for (int k = 1; k <= opt.decades; ++k) {
        const double t = dir == GrowthDirection::to_infinity ? std::pow(opt.base, k)
                                                             : std::pow(opt.base, -k);
        ts[k - 1] = t;
        vs[k - 1] = g(t);
    }
    std::ostringstream note;
    note << "numeric evidence at scale " << opt.base << "^" << opt.decades;
    out.note = note.str();

    const int n = opt.decades;
    for (int k = std::max(1, n - opt.monotone_tail); k < n; ++k) {
        if (!(vs[k] > vs[k - 1])) {
            out.verdict = Verdict::fail;
            out.counter_t = ts[k];
            out.counter_value = vs[k];
            return out;
        }
    }
    if (!(vs[n - 1] - vs[n - 2] >= opt.min_last_rise) ||
        !(vs[n - 1] >= opt.clear_threshold)) {
        out.verdict = Verdict::fail;
        out.counter_t = ts[n - 1];
        out.counter_value = vs[n - 1];
        return out;
    }
    out.verdict = Verdict::pass;
    return out;
}

std::vector<double> log_samples(double lo, double hi, int n) {
    std::vector<double> out(n);
    const double a = std::log(lo), b = std::log(hi);
    for (int i = 0; i < n; ++i) out[i] = std::exp(a + (b - a) * i / (n - 1));
    return out;
}

CompactnessReport compactness_check(const VolIsoSplitEnergy& e, double c) {
    CompactnessReport rep;
    rep.split_path = true;
    const auto& hhat = e.isochoric.value;
    const auto& f = e.volumetric.value;

    rep.h_at_inf = growth_check(hhat, GrowthDirection::to_infinity);
    rep.f_at_inf = growth_check(f, GrowthDirection::to_infinity);
    rep.f_at_zero = growth_check(f, GrowthDirection::to_zero);

    if (e.growth.has_value()) {
        // registered closed-form growth flags must match the numeric verdicts
        const GrowthFlags gf = *e.growth;
        const bool consistent = (gf.h_at_inf == (rep.h_at_inf.verdict == Verdict::pass)) &&
                                (gf.f_at_inf == (rep.f_at_inf.verdict == Verdict::pass)) &&
                                (gf.f_at_zero == (rep.f_at_zero.verdict == Verdict::pass));
        if (!consistent) {
            throw std::logic_error("compactness_check: registered growth flags of " + e.name +
                                   " disagree with the numeric growth verdicts");
        }
    }

    if (rep.h_at_inf.verdict != Verdict::pass || rep.f_at_inf.verdict != Verdict::pass ||
        rep.f_at_zero.verdict != Verdict::pass) {
        rep.overall = Verdict::fail;
        rep.note = "a growth condition failed";
        return rep;
    }

    // sampled lower bound d over both components
    const std::vector<double> hs = log_samples(1.0, 1e6, 2000);
    const std::vector<double> fs = log_samples(1e-6, 1e6, 3000);
    double d = kInf;
    std::vector<double> hv(hs.size()), fv(fs.size());
    for (std::size_t i = 0; i < hs.size(); ++i) {
        hv[i] = hhat(hs[i]);
        d = std::min(d, hv[i]);
    }
    for (std::size_t i = 0; i < fs.size(); ++i) {
        fv[i] = f(fs[i]);
        d = std::min(d, fv[i]);
    }
    rep.lower_bound_d = d;
    const double target = c - d;

    // smallest sampled r >= 1 with hhat, f > c - d on every later sample
    double r = kInf;
    {
        double r_h = kInf;
        for (std::size_t i = hs.size(); i-- > 0;) {
            if (!(hv[i] > target)) break;
            r_h = hs[i];
        }
        double r_f = kInf;
        for (std::size_t i = fs.size(); i-- > 0;) {
            if (!(fv[i] > target)) break;
            r_f = fs[i];
        }
        if (std::isfinite(r_h) && std::isfinite(r_f)) r = std::max({r_h, r_f, 1.0});
    }

    // boundary margin: rho <= 1 with f > c - d below rho and hhat > c - d above 1/rho
    double rho = 0.0;
    {
        double rho_f = 0.0;
        for (std::size_t i = 0; i < fs.size(); ++i) {
            if (!(fv[i] > target)) break;
            rho_f = fs[i];
        }
        double top_h = kInf;
        for (std::size_t i = hs.size(); i-- > 0;) {
            if (!(hv[i] > target)) break;
            top_h = hs[i];
        }
        if (rho_f > 0.0 && std::isfinite(top_h)) rho = std::min({rho_f, 1.0 / top_h, 1.0});
    }

    if (!std::isfinite(r) || !(rho > 0.0)) {
        rep.overall = Verdict::fail;
        rep.note = "no enclosing radius / boundary margin at the sampled scale";
        return rep;
    }
    rep.radius = r;
    rep.boundary_margin = rho;
    rep.overall = Verdict::pass;
    rep.note = "operator-norm radius and boundary margin constructed from the growth bounds";
    return rep;
}

CompactnessReport compactness_check_probe(const OrderedSVEnergy& e, double c) {
    CompactnessReport rep;
    rep.split_path = false;
    const auto& g = e.value;
    auto distortion_ray = [&g](double t) { return g(std::sqrt(t), 1.0 / std::sqrt(t)); };
    auto conformal_ray = [&g](double t) {
        const double a = std::sqrt(t);
        return g(a, a);
    };
    rep.h_at_inf = growth_check(distortion_ray, GrowthDirection::to_infinity);
    rep.f_at_inf = growth_check(conformal_ray, GrowthDirection::to_infinity);
    rep.f_at_zero = growth_check(conformal_ray, GrowthDirection::to_zero);

    const bool all_pass = rep.h_at_inf.verdict == Verdict::pass &&
                          rep.f_at_inf.verdict == Verdict::pass &&
                          rep.f_at_zero.verdict == Verdict::pass;
    if (!all_pass) {
        rep.overall = Verdict::fail;
        std::ostringstream note;
        note << "a probe ray stays below level c = " << c << " arbitrarily far out";
        rep.note = note.str();
        return rep;
    }
    rep.overall = Verdict::inconclusive;
    rep.note = "probe rays diverge (evidence only; no split form available)";
    return rep;
}

// ---- paths -----------------------------------------------------------------

namespace {

PathSegment rotation_segment(const Mat2& base, double a1, double a2, const std::string& label) {
    PathSegment seg;
    seg.kind = PathSegment::Kind::rotation_interp;
    seg.label = label;
    seg.eval = [base, a1, a2](double s) {
        return rotation(s * a1) * base * rotation(s * a2);
    };
    return seg;
}

SublevelPath reverse_path(SublevelPath path) {
    std::reverse(path.segments.begin(), path.segments.end());
    for (PathSegment& seg : path.segments) {
        seg.eval = [inner = seg.eval](double s) { return inner(1.0 - s); };
    }
    path.reversed = true;
    return path;
}

}  // namespace

SublevelPath connect_path(const VolIsoSplitEnergy& e, const Mat2& f, const Mat2& f_tilde,
                          double c, bool verify_hypotheses) {
    const OrderedSVEnergy g = split_to_ordered(e);
    const double wf = eval_matrix(g, f);
    const double wft = eval_matrix(g, f_tilde);
    if (wf > c + kPathTol || wft > c + kPathTol) {
        throw PreconditionError("connect_path: an endpoint lies outside the sublevel set");
    }
    if (verify_hypotheses) {
        for (double t : log_samples(1.0, 1e3, 400)) {
            if (scalar_deriv(e.isochoric, t) < -1e-9) {
                throw PreconditionError("connect_path: hhat is not nondecreasing on [1, inf)");
            }
        }
        const QConvexityResult q = q_convexity_1d(e.volumetric.value, log_samples(1e-3, 1e3, 500));
        if (q.verdict != Verdict::pass) {
            throw PreconditionError("connect_path: f is not q-convex on the sampled range");
        }
    }

    if (linear_distortion(f_tilde) > linear_distortion(f)) {
        SublevelPath swapped = connect_path(e, f_tilde, f, c, false);
        return reverse_path(std::move(swapped));
    }

    const OrderedSV sv = svd_ordered(f);
    const OrderedSV svt = svd_ordered(f_tilde);
    const double l1 = sv.lambda1, l2 = sv.lambda2;
    const double m1 = std::sqrt(l1 * l2 / (svt.lambda1 * svt.lambda2)) * svt.lambda1;
    const double m2 = std::sqrt(l1 * l2 / (svt.lambda1 * svt.lambda2)) * svt.lambda2;

    SublevelPath path;
    path.level = c;

    path.segments.push_back(rotation_segment(f, sv.q1_angle, sv.q2_angle, "X1 rotation-interpolation"));

    PathSegment x2;
    x2.kind = PathSegment::Kind::distortion_descent;
    x2.label = "X2 distortion-descent (det constant)";
    x2.eval = [l1, l2, m1, m2](double s) {
        return Mat2::diag(std::pow(l1, 1.0 - s) * std::pow(m1, s),
                          std::pow(l2, 1.0 - s) * std::pow(m2, s));
    };
    path.segments.push_back(std::move(x2));

    PathSegment x3;
    x3.kind = PathSegment::Kind::conformal_scale;
    x3.label = "X3 conformal-scaling (K constant)";
    const double ratio = std::sqrt(svt.lambda1 * svt.lambda2 / (l1 * l2));
    x3.eval = [ratio, m1, m2](double s) {
        const double a = std::pow(ratio, s);
        return Mat2::diag(a * m1, a * m2);
    };
    path.segments.push_back(std::move(x3));

    const Mat2 dt = Mat2::diag(svt.lambda1, svt.lambda2);
    path.segments.push_back(rotation_segment(dt, -svt.q1_angle, -svt.q2_angle,
                                             "X4 rotation-interpolation"));
    return path;
}

SublevelPath aubert_connect_path(const Mat2& f, const Mat2& f_tilde, double c) {
    // the quartic energy in ordered singular values
    auto w = [](double a, double b) {
        return (a * a * a * a + b * b * b * b) / 3.0 + 0.5 * a * a * b * b -
               (2.0 / 3.0) * (a * a * a * b + a * b * b * b);
    };
    const OrderedSV sv = svd_ordered(f);
    const OrderedSV svt = svd_ordered(f_tilde);
    if (!(f.det() > 0.0) || !(f_tilde.det() > 0.0)) {
        throw PreconditionError("aubert_connect_path: endpoints must lie in GL+(2)");
    }
    if (w(sv.lambda1, sv.lambda2) > c + kPathTol || w(svt.lambda1, svt.lambda2) > c + kPathTol) {
        throw PreconditionError("aubert_connect_path: an endpoint lies outside the sublevel set");
    }
    if (svt.lambda1 < sv.lambda1) {
        SublevelPath swapped = aubert_connect_path(f_tilde, f, c);
        return reverse_path(std::move(swapped));
    }

    SublevelPath path;
    path.level = c;
    path.segments.push_back(rotation_segment(f, sv.q1_angle, sv.q2_angle, "rotation to diagonal"));

    const double l1 = sv.lambda1, l2 = sv.lambda2;
    const double lt1 = svt.lambda1, lt2 = svt.lambda2;

    PathSegment a1;
    a1.kind = PathSegment::Kind::axis_line;
    a1.label = "X1 axis (raise small axis to the conformal ray)";
    a1.eval = [l1, l2](double s) { return Mat2::diag(l1, l2 + s * (l1 - l2)); };
    path.segments.push_back(std::move(a1));

    PathSegment a2;
    a2.kind = PathSegment::Kind::conformal_line;
    a2.label = "X2 conformal ray";
    a2.eval = [l1, lt1](double s) {
        const double t = l1 + s * (lt1 - l1);
        return Mat2::diag(t, t);
    };
    path.segments.push_back(std::move(a2));

    PathSegment a3;
    a3.kind = PathSegment::Kind::axis_line;
    a3.label = "X3 axis (descend to the target pair)";
    a3.eval = [lt1, lt2](double s) { return Mat2::diag(lt1, lt1 - s * (lt1 - lt2)); };
    path.segments.push_back(std::move(a3));

    const Mat2 dt = Mat2::diag(lt1, lt2);
    path.segments.push_back(rotation_segment(dt, -svt.q1_angle, -svt.q2_angle,
                                             "rotation to the target frame"));
    return path;
}

PathValidation validate_path(const OrderedSVEnergy& e, const SublevelPath& path,
                             int samples_per_segment) {
    PathValidation v;
    v.max_energy_excess = -kInf;
    const int n = samples_per_segment;
    for (std::size_t si = 0; si < path.segments.size(); ++si) {
        const PathSegment& seg = path.segments[si];
        SegmentStats stats;
        stats.kind = seg.kind;
        stats.min_energy_deriv = kInf;
        stats.max_energy_deriv = -kInf;

        const Mat2 first = seg.eval(0.0);
        const double det0 = first.det();
        const double k0 = linear_distortion(first);
        const double w0 = eval_matrix(e, first);

        double prev_w = w0;
        for (int k = 0; k <= n; ++k) {
            const double s = static_cast<double>(k) / n;
            const Mat2 m = seg.eval(s);
            const double w = eval_matrix(e, m);
            v.max_energy_excess = std::max(v.max_energy_excess, w - path.level);
            stats.det_drift = std::max(stats.det_drift, std::fabs(m.det() - det0));
            stats.k_drift = std::max(stats.k_drift, std::fabs(linear_distortion(m) - k0));
            stats.energy_drift = std::max(stats.energy_drift, std::fabs(w - w0));
            if (k > 0) {
                const double dw = (w - prev_w) * n;  // sampled derivative
                stats.min_energy_deriv = std::min(stats.min_energy_deriv, dw);
                stats.max_energy_deriv = std::max(stats.max_energy_deriv, dw);
            }
            prev_w = w;
        }
        if (si + 1 < path.segments.size()) {
            const Mat2 gap = seg.eval(1.0) - path.segments[si + 1].eval(0.0);
            const double gnorm = gap.frobenius_norm();
            v.max_endpoint_gap = std::max(v.max_endpoint_gap, gnorm);
        }
        v.segments.push_back(stats);
    }
    v.ok = v.max_energy_excess <= kPathTol && v.max_endpoint_gap <= 1e-10;
    return v;
}

// ---- q-convexity -------------------------------------------------------------

QConvexityResult q_convexity_1d(const std::function<double(double)>& g,
                                const std::vector<double>& samples) {
    QConvexityResult res;
    std::vector<double> ts = samples;
    std::sort(ts.begin(), ts.end());
    const std::size_t n = ts.size();
    if (n < 3) return res;
    std::vector<double> vs(n);
    double scale = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        vs[i] = g(ts[i]);
        scale = std::max(scale, std::fabs(vs[i]));
    }
    const double tol = 1e-10 * scale;

    std::vector<std::size_t> pref(n), suf(n);
    pref[0] = 0;
    for (std::size_t i = 1; i < n; ++i) pref[i] = vs[i] < vs[pref[i - 1]] ? i : pref[i - 1];
    suf[n - 1] = n - 1;
    for (std::size_t i = n - 1; i-- > 0;) suf[i] = vs[i] < vs[suf[i + 1]] ? i : suf[i + 1];

    for (std::size_t j = 1; j + 1 < n; ++j) {
        const std::size_t a = pref[j - 1];
        const std::size_t b = suf[j + 1];
        if (vs[j] > vs[a] + tol && vs[j] > vs[b] + tol) {
            res.verdict = Verdict::fail;
            res.witness_a = ts[a];
            res.witness_t = ts[j];
            res.witness_b = ts[b];
            return res;
        }
    }
    res.verdict = Verdict::pass;
    return res;
}

// ---- grid connectivity ----------------------------------------------------------

ConnectivityResult grid_connectivity(const OrderedSVEnergy& e, double c, const DomainGrid& grid) {
    ConnectivityResult res;
    res.n_u = grid.n_u;
    res.n_v = grid.n_v;
    res.labels.assign(static_cast<std::size_t>(grid.n_u) * grid.n_v, -1);

    // batch-evaluate the ordered nodes
    std::vector<std::size_t> flat;
    std::vector<double> l1, l2;
    flat.reserve(res.labels.size());
    for (int i = 0; i < grid.n_u; ++i) {
        for (int j = 0; j < grid.n_v; ++j) {
            if (!grid.ordered(i, j)) continue;
            flat.push_back(static_cast<std::size_t>(i) * grid.n_v + j);
            l1.push_back(std::exp(grid.u(i)));
            l2.push_back(std::exp(grid.v(j)));
        }
    }
    std::vector<double> w(flat.size());
    eval_batch(e, l1.data(), l2.data(), w.data(), flat.size());

    std::vector<char> in_set(res.labels.size(), 0);
    for (std::size_t k = 0; k < flat.size(); ++k) {
        if (w[k] <= c) {
            in_set[flat[k]] = 1;
            ++res.in_set;
        }
    }

    int next_label = 0;
    std::deque<std::pair<int, int>> queue;
    for (int i = 0; i < grid.n_u; ++i) {
        for (int j = 0; j < grid.n_v; ++j) {
            const std::size_t idx = static_cast<std::size_t>(i) * grid.n_v + j;
            if (!in_set[idx] || res.labels[idx] >= 0) continue;
            const int label = next_label++;
            res.labels[idx] = label;
            queue.emplace_back(i, j);
            while (!queue.empty()) {
                const auto [ci, cj] = queue.front();
                queue.pop_front();
                const int di[4] = {1, -1, 0, 0};
                const int dj[4] = {0, 0, 1, -1};
                for (int d = 0; d < 4; ++d) {
                    const int ni = ci + di[d], nj = cj + dj[d];
                    if (ni < 0 || nj < 0 || ni >= grid.n_u || nj >= grid.n_v) continue;
                    const std::size_t nidx = static_cast<std::size_t>(ni) * grid.n_v + nj;
                    if (!in_set[nidx] || res.labels[nidx] >= 0) continue;
                    res.labels[nidx] = label;
                    queue.emplace_back(ni, nj);
                }
            }
        }
    }
    res.components = next_label;
    return res;
}

}  // namespace convexlab
