#include "convexlab/report.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

#include "convexlab/kernels.hpp"
#include "convexlab/rank_one.hpp"
#include "convexlab/sublevel.hpp"

namespace convexlab {

using nlohmann::json;

std::string format_double_shortest(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string format_double_human(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return std::string(buf);
}

// ---- contours ---------------------------------------------------------------

namespace {

std::vector<double> contour_axis(const ContourOptions& opt) {
    std::vector<double> axis(opt.n);
    const double a = std::log(opt.l_min), b = std::log(opt.l_max);
    for (int i = 0; i < opt.n; ++i) axis[i] = std::exp(a + (b - a) * i / (opt.n - 1));
    return axis;
}

// W(diag(x, y)) for positive x, y: the ordered form at (max, min).
std::vector<double> contour_values(const Energy& e, const std::vector<double>& axis) {
    const std::size_t n = axis.size();
    std::vector<double> l1(n * n), l2(n * n), w(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            l1[i * n + j] = std::max(axis[i], axis[j]);
            l2[i * n + j] = std::min(axis[i], axis[j]);
        }
    }
    eval_batch(e.ordered, l1.data(), l2.data(), w.data(), n * n);
    return w;
}

}  // namespace

std::string contour_csv(const Energy& e, const ContourOptions& opt) {
    const std::vector<double> axis = contour_axis(opt);
    const std::vector<double> w = contour_values(e, axis);
    std::string out = "lambda1,lambda2,W\n";
    for (int i = 0; i < opt.n; ++i) {
        for (int j = 0; j < opt.n; ++j) {
            out += format_double_shortest(axis[i]);
            out += ',';
            out += format_double_shortest(axis[j]);
            out += ',';
            out += format_double_shortest(w[static_cast<std::size_t>(i) * opt.n + j]);
            out += '\n';
        }
    }
    return out;
}

std::string contour_svg(const Energy& e, const ContourOptions& opt) {
    const std::vector<double> axis = contour_axis(opt);
    const std::vector<double> w = contour_values(e, axis);
    std::vector<double> levels = opt.levels;
    std::sort(levels.begin(), levels.end());

    const int cell = 4;
    const int size = cell * opt.n;
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\""
        << size << "\" viewBox=\"0 0 " << size << " " << size << "\">\n";
    svg << "<rect width=\"" << size << "\" height=\"" << size << "\" fill=\"#ffffff\"/>\n";
    for (int i = 0; i < opt.n; ++i) {
        for (int j = 0; j < opt.n; ++j) {
            const double v = w[static_cast<std::size_t>(i) * opt.n + j];
            std::size_t band = levels.size();
            for (std::size_t k = 0; k < levels.size(); ++k) {
                if (v <= levels[k]) {
                    band = k;
                    break;
                }
            }
            if (band == levels.size()) continue;  // above every level: background
            const int shade = 40 + static_cast<int>(190.0 * band / std::max<std::size_t>(1, levels.size()));
            svg << "<rect x=\"" << i * cell << "\" y=\"" << (opt.n - 1 - j) * cell
                << "\" width=\"" << cell << "\" height=\"" << cell << "\" fill=\"rgb("
                << shade << ',' << shade << ',' << shade << ")\"/>\n";
        }
    }
    svg << "</svg>\n";
    return svg.str();
}

// ---- check reports ------------------------------------------------------------

json check_report_to_json(const CheckReport& r) {
    json j;
    j["schema_version"] = r.schema_version;
    j["energy"] = r.energy;
    j["check"] = r.check;
    j["verdict"] = r.verdict;
    j["grid"] = r.grid;
    j["witnesses"] = r.witnesses;
    j["margins"] = r.margins;
    if (r.wall_time_ms.has_value()) j["wall_time_ms"] = *r.wall_time_ms;
    else j["wall_time_ms"] = nullptr;
    return j;
}

CheckReport check_report_from_json(const json& j) {
    CheckReport r;
    r.schema_version = j.at("schema_version").get<int>();
    r.energy = j.at("energy").get<std::string>();
    r.check = j.at("check").get<std::string>();
    r.verdict = j.at("verdict").get<std::string>();
    r.grid = j.at("grid");
    r.witnesses = j.at("witnesses");
    r.margins = j.at("margins");
    if (!j.at("wall_time_ms").is_null()) r.wall_time_ms = j.at("wall_time_ms").get<double>();
    return r;
}

namespace {

json mat2_json(const Mat2& m) { return json::array({m.a11, m.a12, m.a21, m.a22}); }

json scan_witness_json(const LineScanWitness& w) {
    json j;
    j["base"] = mat2_json(w.base);
    j["direction"] = mat2_json(w.direction_matrix);
    j["t"] = w.t;
    j["second_difference"] = w.second_difference;
    j["from_refinement"] = w.from_refinement;
    return j;
}

json poly_witness_json(const PolyWitness& w) {
    json j;
    j["gamma"] = json::array({w.gamma1, w.gamma2});
    j["interval"] = json::array({w.interval.c_lo, w.interval.c_hi});
    j["nu"] = json::array({w.nu1, w.nu2});
    j["required_bound"] = w.required_bound;
    j["orientation"] = w.orientation == BoundOrientation::upper ? "c_le" : "c_ge";
    j["residual"] = w.residual;
    j["joint"] = w.joint;
    if (w.joint) j["nu_other"] = json::array({w.nu_other1, w.nu_other2});
    return j;
}

json growth_json(const GrowthVerdict& g) {
    json j;
    j["verdict"] = verdict_name(g.verdict);
    j["note"] = g.note;
    if (g.verdict == Verdict::fail) {
        j["counter_t"] = g.counter_t;
        j["counter_value"] = g.counter_value;
    }
    return j;
}

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                         start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

}  // namespace

CheckReport run_rank_one_check(const Energy& e, const std::string& method, bool timings,
                               int scan_angle_samples) {
    const Stopwatch sw;
    CheckReport r;
    r.energy = e.name;
    r.check = "rank-one";

    const bool want_split = method == "split" || method == "both";
    const bool want_scan = method == "scan" || method == "both";
    if (!want_split && !want_scan) {
        throw std::invalid_argument("rank-one check: method must be split, scan, or both");
    }
    if (method == "split" && !e.split.has_value()) {
        throw RefusalError("rank-one check: " + e.name + " has no volumetric-isochoric split");
    }

    bool split_ran = false, split_pass = false;
    if (want_split && e.split.has_value()) {
        const SplitCriterionReport rep = split_rank_one_criterion(*e.split);
        split_ran = true;
        split_pass = rep.overall;
        json m;
        m["h0"] = rep.h0.value;
        m["f0"] = rep.f0.value;
        m["h0_at_boundary"] = rep.h0.at_boundary;
        m["f0_at_boundary"] = rep.f0.at_boundary;
        m["condition_i_margin"] = rep.condition_i_margin;
        m["condition_ii_margin"] = rep.condition_ii.worst_margin;
        m["condition_iii_margin"] = rep.condition_iii.worst_margin;
        m["condition_iv_margin"] = rep.condition_iv.worst_margin;
        m["f_unbounded_below"] = rep.f_unbounded_below;
        m["fd_derivatives"] = rep.fd_derivatives;
        m["conditions"] = json::array({rep.condition_i, rep.condition_ii.pass,
                                       rep.condition_iii.pass, rep.condition_iv.pass});
        r.margins["split"] = m;
        r.grid["split_t_samples"] = static_cast<long>(rep.grid_t.size());
    }

    bool scan_ran = false, scan_clean = false;
    if (want_scan) {
        RankOneScanGrid grid;
        if (scan_angle_samples > 0) {
            grid.theta_samples = scan_angle_samples;
            grid.phi_samples = scan_angle_samples;
        }
        const ScanResult sr = rank_one_scan(e.ordered, grid);
        scan_ran = true;
        scan_clean = !sr.violation_found;
        r.grid["scan_resolution"] = sr.resolution;
        r.margins["scan_min_second_difference"] = sr.min_second_difference;
        if (sr.witness.has_value()) r.witnesses.push_back(scan_witness_json(*sr.witness));
    }

    if (split_ran && !split_pass) r.verdict = "fail";
    else if (scan_ran && !scan_clean) r.verdict = "fail";
    else if (split_ran && split_pass) r.verdict = "pass";
    else r.verdict = "no-violation-found";

    if (timings) r.wall_time_ms = sw.ms();
    return r;
}

CheckReport run_polyconvexity_check(const Energy& e, const SVGrid& gamma_grid,
                                    const SVGrid& nu_grid, bool timings) {
    const Stopwatch sw;
    CheckReport r;
    r.energy = e.name;
    r.check = "polyconvexity";
    const FalsifyResult fr = polyconvexity_falsify(e.ordered, gamma_grid, nu_grid);
    r.grid["resolution"] = fr.resolution;
    r.grid["gammas_checked"] = fr.gammas_checked;
    r.grid["gammas_skipped"] = fr.gammas_skipped;
    if (fr.falsified) {
        r.verdict = "falsified";
        r.witnesses.push_back(poly_witness_json(*fr.witness));
        r.margins["residual"] = fr.witness->residual;
    } else {
        r.verdict = "no-violation-found";
    }
    if (timings) r.wall_time_ms = sw.ms();
    return r;
}

CheckReport run_sublevel_check(const Energy& e, double level, bool compactness,
                               bool connectivity,
                               const std::optional<std::pair<Mat2, Mat2>>& path_endpoints,
                               bool timings) {
    const Stopwatch sw;
    CheckReport r;
    r.energy = e.name;
    r.check = "sublevel";
    r.grid["level"] = level;
    bool any_fail = false, any_inconclusive = false;

    if (compactness) {
        const CompactnessReport rep = e.split.has_value()
                                          ? compactness_check(*e.split, level)
                                          : compactness_check_probe(e.ordered, level);
        json m;
        m["split_path"] = rep.split_path;
        m["h_at_inf"] = growth_json(rep.h_at_inf);
        m["f_at_inf"] = growth_json(rep.f_at_inf);
        m["f_at_zero"] = growth_json(rep.f_at_zero);
        if (rep.split_path && rep.overall == Verdict::pass) {
            m["lower_bound_d"] = rep.lower_bound_d;
            m["radius"] = rep.radius;
            m["boundary_margin"] = rep.boundary_margin;
        }
        m["verdict"] = verdict_name(rep.overall);
        m["note"] = rep.note;
        r.margins["compactness"] = m;
        if (rep.overall == Verdict::fail) any_fail = true;
        if (rep.overall == Verdict::inconclusive) any_inconclusive = true;
    }

    if (connectivity) {
        const DomainGrid grid;
        const ConnectivityResult cr = grid_connectivity(e.ordered, level, grid);
        json m;
        m["components"] = cr.components;
        m["nodes_in_set"] = cr.in_set;
        m["grid"] = std::to_string(grid.n_u) + "x" + std::to_string(grid.n_v);
        r.margins["connectivity"] = m;
    }

    if (path_endpoints.has_value()) {
        if (!e.split.has_value() && e.name != "aubert") {
            throw RefusalError("sublevel path: no path constructor for " + e.name);
        }
        const SublevelPath path = e.name == "aubert"
            ? aubert_connect_path(path_endpoints->first, path_endpoints->second, level)
            : connect_path(*e.split, path_endpoints->first, path_endpoints->second, level);
        const PathValidation pv = validate_path(e.ordered, path);
        json m;
        m["segments"] = static_cast<long>(path.segments.size());
        m["max_energy_excess"] = pv.max_energy_excess;
        m["max_endpoint_gap"] = pv.max_endpoint_gap;
        m["reversed"] = path.reversed;
        m["valid"] = pv.ok;
        json labels = json::array();
        for (const PathSegment& seg : path.segments) labels.push_back(seg.label);
        m["labels"] = labels;
        r.margins["path"] = m;
        if (!pv.ok) any_fail = true;
    }

    r.verdict = any_fail ? "fail" : (any_inconclusive ? "inconclusive" : "pass");
    if (timings) r.wall_time_ms = sw.ms();
    return r;
}

// ---- reproduce-paper suite -------------------------------------------------------

namespace {

struct ItemCheck {
    bool pass = true;
    std::string detail;

    void expect(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
    void expect_near(double got, double want, double tol, const std::string& what) {
        if (!(std::fabs(got - want) <= tol)) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += what + ": got " + format_double_shortest(got) + ", want " +
                      format_double_shortest(want) + " (tol " + format_double_human(tol) + ")";
        }
    }
};

SuiteItem item_values(const Energy& w0) {
    ItemCheck c;
    json data;
    const double e1 = std::exp(1.0);
    const double g_id = eval_matrix(w0.ordered, Mat2::identity());
    c.expect_near(g_id, 2.0, 1e-12, "W(identity)");
    const double g43 = eval_ordered(w0.ordered, std::exp(4.0), std::exp(3.0));
    c.expect_near(g43, e1 + 6.0 + std::exp(-7.0), 1e-12, "g(e^4, e^3)");
    const double g_e1 = eval_ordered(w0.ordered, e1, 1.0);
    c.expect_near(g_e1, e1 + 1.0 / e1, 1e-12, "g(e, 1)");
    const Mat2 rotated = rotation(0.7) * Mat2::diag(std::exp(4.0), std::exp(3.0)) * rotation(-1.2);
    c.expect_near(eval_matrix(w0.ordered, rotated), g43, 1e-12 * g43, "isotropy at (e^4, e^3)");

    double prev = eval_matrix(w0.ordered, Mat2::identity() * 0.5);
    bool increasing = true;
    for (int n = 3; n <= 64; n *= 2) {
        const double v = eval_matrix(w0.ordered, Mat2::identity() * (1.0 / n));
        if (!(v > prev)) increasing = false;
        prev = v;
    }
    c.expect(increasing, "W((1/n) id) not increasing in n");
    c.expect(prev > 1e3, "W((1/n) id) stays small for n = 64");
    data["g_identity"] = g_id;
    data["g_e4_e3"] = g43;
    data["g_e_1"] = g_e1;
    return SuiteItem{"values", c.pass, c.detail, std::nullopt, data};
}

SuiteItem item_rank_one(const Energy& w0) {
    ItemCheck c;
    json data;
    if (!w0.split.has_value()) {
        return SuiteItem{"rank-one", false, "energy has no split form", std::nullopt, data};
    }
    const SplitCriterionReport rep = split_rank_one_criterion(*w0.split);
    c.expect_near(rep.h0.value, 1.0, 1e-6, "h0");
    c.expect_near(rep.f0.value, -1.0, 1e-6, "f0");
    c.expect(rep.condition_i, "condition i fails");
    c.expect(rep.condition_ii.pass, "condition ii fails");
    c.expect(rep.condition_iii.pass, "condition iii fails");
    c.expect(rep.condition_iv.pass, "condition iv fails");
    c.expect(rep.overall, "overall verdict is fail");
    double worst_iii = 0.0;
    long counted = 0;
    for (double v : rep.iii_first_disjunct) {
        if (std::isnan(v)) continue;
        worst_iii = std::max(worst_iii, std::fabs(v));
        ++counted;
    }
    c.expect(worst_iii <= 1e-10, "condition iii first disjunct deviates from 0 by " +
                                     format_double_human(worst_iii));
    c.expect(counted >= 2000, "fewer than 2000 grid evaluations of condition iii");
    c.expect(rep.condition_iv.worst_margin >= -1e-9, "condition iv margin below tolerance");
    data["h0"] = rep.h0.value;
    data["f0"] = rep.f0.value;
    data["iii_first_disjunct_max_abs"] = worst_iii;
    data["iii_points"] = counted;
    data["iv_worst_margin"] = rep.condition_iv.worst_margin;
    return SuiteItem{"rank-one", c.pass, c.detail, std::nullopt, data};
}

SuiteItem item_polyconvexity(const Energy& w0) {
    ItemCheck c;
    json data;
    const double e1 = std::exp(1.0), e3 = std::exp(3.0), e4 = std::exp(4.0);
    const double e7 = std::exp(7.0), e8 = std::exp(8.0), e9 = std::exp(9.0);
    const double e10 = std::exp(10.0), e11 = std::exp(11.0), e14 = std::exp(14.0);

    const CInterval iv = c_interval(w0.ordered, e4, e3);
    const double c_lo_closed = -(1.0 + e8) / e14;
    const double c_hi_closed = -(1.0 + e1 - 3.0 * e8 + e9) / (e14 * (1.0 + e1));
    c.expect_near(iv.c_lo, c_lo_closed, 1e-12, "c_lo vs closed form");
    c.expect_near(iv.c_lo, -0.00247958, 1e-8, "c_lo vs pinned decimal");
    c.expect_near(iv.c_hi, c_hi_closed, 1e-12, "c_hi vs closed form");

    const RequiredCBound rb = required_c_bound(w0.ordered, e4, e3, e1, 1.0);
    const double req_closed = (2.0 - 3.0 * e3 - 2.0 * e7 + e9 - 4.0 * e10) /
                              (e11 * (e3 - 1.0) * (e3 - 1.0));
    c.expect(rb.orientation == BoundOrientation::upper, "bound orientation is not c <= theta");
    c.expect_near(rb.threshold, req_closed, 1e-12, "required bound vs closed form");
    c.expect_near(rb.threshold, -0.00377147, 1e-8, "required bound vs pinned decimal");
    c.expect_near(iv.c_lo - rb.threshold, 0.0012919, 1e-6, "gap between c_lo and the required bound");
    c.expect(rb.threshold < iv.c_lo, "required bound does not undercut the interval");

    const double resid = minorant_residual(w0.ordered, e4, e3, e1, 1.0, iv.c_lo);
    c.expect(resid < 0.0, "minorant unexpectedly holds at c = c_lo");

    const FalsifyResult fr =
        polyconvexity_falsify(w0.ordered, default_gamma_grid(), default_nu_grid());
    c.expect(fr.falsified, "default-grid falsification found no witness");
    c.expect(fr.witness.has_value() && fr.witness->residual > 0.0, "witness carries no margin");

    data["c_lo"] = iv.c_lo;
    data["c_hi"] = iv.c_hi;
    data["required_bound"] = rb.threshold;
    data["gap"] = iv.c_lo - rb.threshold;
    data["minorant_residual_at_c_lo"] = resid;
    if (fr.witness.has_value()) data["witness"] = poly_witness_json(*fr.witness);
    return SuiteItem{"polyconvexity", c.pass, c.detail, std::nullopt, data};
}

SuiteItem item_adm_thresholds() {
    ItemCheck c;
    json data;
    const ScanResult r12 = rank_one_scan(make_adm(1.2).ordered);
    const ScanResult r11 = rank_one_scan(make_adm(1.1).ordered);
    const ScanResult r10 = rank_one_scan(make_adm(1.0).ordered);
    c.expect(r12.violation_found, "no rank-one violation at gamma = 1.2");
    c.expect(!r11.violation_found, "spurious rank-one violation at gamma = 1.1");
    c.expect(!r10.violation_found, "spurious rank-one violation at gamma = 1.0");

    const ScanResult c95 = convexity_scan(make_adm(0.95).ordered);
    const ScanResult c94 = convexity_scan(make_adm(0.94).ordered);
    c.expect(c95.violation_found, "no convexity violation at gamma = 0.95");
    c.expect(!c94.violation_found, "spurious convexity violation at gamma = 0.94");

    const ScanResult r95 = rank_one_scan(make_adm(0.95).ordered);
    c.expect(!r95.violation_found, "gamma = 0.95 should break convexity only, not rank-one");

    data["rank_one_min_1.2"] = r12.min_second_difference;
    data["rank_one_min_1.1"] = r11.min_second_difference;
    data["convexity_min_0.95"] = c95.min_second_difference;
    data["convexity_min_0.94"] = c94.min_second_difference;
    return SuiteItem{"adm-thresholds", c.pass, c.detail, std::nullopt, data};
}

SuiteItem item_compactness(const Energy& w0) {
    ItemCheck c;
    json data;
    for (double level : {3.0, 5.0, 10.0}) {
        if (!w0.split.has_value()) {
            c.expect(false, "w0 has no split form");
            break;
        }
        const CompactnessReport rep = compactness_check(*w0.split, level);
        const std::string tag = "c=" + format_double_human(level);
        c.expect(rep.overall == Verdict::pass, "w0 compactness fails at " + tag);
        c.expect(rep.boundary_margin > 0.0, "w0 boundary margin vanishes at " + tag);
        data["w0_radius_" + tag] = rep.radius;
        data["w0_boundary_margin_" + tag] = rep.boundary_margin;
    }
    const CompactnessReport adm = compactness_check_probe(make_adm(1.1).ordered, 1.0);
    c.expect(adm.overall == Verdict::fail, "adm+ gamma=1.1 not flagged non-compact");
    c.expect(adm.f_at_zero.verdict == Verdict::fail, "adm+ det->0 probe should fail");
    const CompactnessReport aub = compactness_check_probe(make_aubert().ordered, 0.0);
    c.expect(aub.overall == Verdict::fail, "aubert not flagged non-compact");
    const CompactnessReport sil = compactness_check_probe(make_silhavy().ordered, 2.0);
    c.expect(sil.overall == Verdict::fail, "silhavy+ not flagged non-compact");
    c.expect(sil.f_at_zero.verdict == Verdict::fail, "silhavy+ det->0 probe should fail");
    data["adm_counter_t"] = adm.f_at_zero.counter_t;
    data["adm_counter_value"] = adm.f_at_zero.counter_value;
    return SuiteItem{"compactness", c.pass, c.detail, std::nullopt, data};
}

SuiteItem item_connectedness(const Energy& w0) {
    ItemCheck c;
    json data;
    if (!w0.split.has_value()) {
        return SuiteItem{"connectedness", false, "w0 has no split form", std::nullopt, data};
    }
    std::mt19937_64 rng(4242u);
    std::uniform_real_distribution<double> entry(-2.0, 2.0);
    auto random_glp = [&]() {
        for (;;) {
            const Mat2 f(entry(rng), entry(rng), entry(rng), entry(rng));
            if (f.det() > 0.05) return f;
        }
    };

    int valid_paths = 0;
    double worst_excess = -1e18, worst_gap = 0.0, worst_det = 0.0, worst_k = 0.0;
    for (int i = 0; i < 100; ++i) {
        const Mat2 f = random_glp();
        const Mat2 ft = random_glp();
        const double level = std::max(eval_matrix(w0.ordered, f), eval_matrix(w0.ordered, ft));
        const SublevelPath path = connect_path(*w0.split, f, ft, level, i == 0);
        const PathValidation pv = validate_path(w0.ordered, path);
        worst_excess = std::max(worst_excess, pv.max_energy_excess);
        worst_gap = std::max(worst_gap, pv.max_endpoint_gap);
        for (const SegmentStats& st : pv.segments) {
            if (st.kind == PathSegment::Kind::distortion_descent)
                worst_det = std::max(worst_det, st.det_drift);
            if (st.kind == PathSegment::Kind::conformal_scale)
                worst_k = std::max(worst_k, st.k_drift);
        }
        if (pv.ok) ++valid_paths;
    }
    c.expect(valid_paths == 100, "only " + std::to_string(valid_paths) + "/100 w0 paths valid");
    c.expect(worst_det <= 1e-12, "det drifts along the distortion segment");
    c.expect(worst_k <= 1e-12, "K drifts along the conformal segment");
    data["w0_paths_valid"] = valid_paths;
    data["w0_worst_energy_excess"] = worst_excess;
    data["w0_worst_endpoint_gap"] = worst_gap;
    data["w0_worst_det_drift"] = worst_det;
    data["w0_worst_k_drift"] = worst_k;

    const Energy aub = make_aubert();
    int aubert_ok = 0;
    for (int i = 0; i < 50; ++i) {
        const Mat2 f = random_glp();
        const Mat2 ft = random_glp();
        const double level = std::max(eval_matrix(aub.ordered, f), eval_matrix(aub.ordered, ft));
        const SublevelPath path = aubert_connect_path(f, ft, level);
        const PathValidation pv = validate_path(aub.ordered, path);
        // segments: [rotation, X1 axis, X2 conformal, X3 axis, rotation]
        bool signs_ok = pv.ok && pv.segments.size() == 5;
        if (signs_ok) {
            const auto& segs = pv.segments;
            const int lo = path.reversed ? 3 : 1;
            const int hi = path.reversed ? 1 : 3;
            if (!path.reversed) {
                signs_ok = segs[lo].max_energy_deriv <= 1e-7 && segs[2].max_energy_deriv <= 1e-7 &&
                           segs[hi].min_energy_deriv >= -1e-7;
            } else {
                // reversed path flips the parameterization, hence the signs
                signs_ok = segs[lo].min_energy_deriv >= -1e-7 && segs[2].min_energy_deriv >= -1e-7 &&
                           segs[hi].max_energy_deriv <= 1e-7;
            }
        }
        if (signs_ok) ++aubert_ok;
    }
    c.expect(aubert_ok == 50, "only " + std::to_string(aubert_ok) + "/50 aubert paths valid");
    data["aubert_paths_valid"] = aubert_ok;

    for (double level : {2.1, 3.0, 5.0}) {
        DomainGrid coarse;
        const ConnectivityResult c1 = grid_connectivity(w0.ordered, level, coarse);
        DomainGrid fine;
        fine.n_u = fine.n_v = 241;
        const ConnectivityResult c2 = grid_connectivity(w0.ordered, level, fine);
        const std::string tag = format_double_human(level);
        c.expect(c1.components == 1, "w0 c=" + tag + " has " + std::to_string(c1.components) +
                                         " components at 121^2");
        c.expect(c2.components == 1, "w0 c=" + tag + " has " + std::to_string(c2.components) +
                                         " components at 241^2");
        data["w0_components_c" + tag] = c1.components;
    }
    const ConnectivityResult ca = grid_connectivity(aub.ordered, 0.0, DomainGrid{});
    c.expect(ca.components == 1, "aubert c=0 is not a single component");
    data["aubert_components_c0"] = ca.components;
    return SuiteItem{"connectedness", c.pass, c.detail, std::nullopt, data};
}

SuiteItem item_cross_method(const Energy& w0) {
    ItemCheck c;
    json data;
    const ScanResult mc_w0 = rank_one_monte_carlo(w0.ordered, 10000);
    c.expect(!mc_w0.violation_found, "w0 Monte-Carlo scan found a violation");
    c.expect(mc_w0.min_second_difference >= -1e-8, "w0 Monte-Carlo minimum below -1e-8");
    const ScanResult mc_aub = rank_one_monte_carlo(make_aubert().ordered, 10000);
    c.expect(!mc_aub.violation_found, "aubert Monte-Carlo scan found a violation");
    c.expect(mc_aub.min_second_difference >= -1e-8, "aubert Monte-Carlo minimum below -1e-8");

    // squared Frobenius norm: convex, hence the tangent minorant with c = 0 holds
    OrderedSVEnergy sq;
    sq.name = "frobenius-squared";
    sq.value = [](double a, double b) { return a * a + b * b; };
    sq.d1 = [](double a, double) { return 2.0 * a; };
    sq.d2 = [](double, double b) { return 2.0 * b; };
    const FalsifyResult fr = polyconvexity_falsify(sq, default_gamma_grid(), default_nu_grid());
    c.expect(!fr.falsified, "falsifier rejected the convex energy l1^2 + l2^2");
    double worst_resid = 0.0;
    for (double g1 : {0.5, 1.5, 3.0}) {
        for (double n1 : {0.3, 1.0, 2.5}) {
            const double r = minorant_residual(sq, g1 + 0.4, g1, n1 + 0.2, n1, 0.0);
            worst_resid = std::min(worst_resid, r);
        }
    }
    c.expect(worst_resid >= -1e-12, "tangent minorant with c = 0 fails for the convex energy");

    OrderedSVEnergy det_e;
    det_e.name = "det";
    det_e.value = [](double a, double b) { return a * b; };
    det_e.d1 = [](double, double b) { return b; };
    det_e.d2 = [](double a, double) { return a; };
    const FalsifyResult fd = polyconvexity_falsify(det_e, default_gamma_grid(), default_nu_grid());
    c.expect(!fd.falsified, "falsifier rejected the polyaffine determinant energy");

    data["w0_mc_min"] = mc_w0.min_second_difference;
    data["aubert_mc_min"] = mc_aub.min_second_difference;
    data["convex_minorant_worst"] = worst_resid;
    return SuiteItem{"cross-method", c.pass, c.detail, std::nullopt, data};
}

}  // namespace

SuiteResult run_reproduce_paper(const SuiteOptions& opt) {
    const Energy w0 = opt.w0_override.has_value() ? *opt.w0_override : make_w0();

    struct Entry {
        const char* name;
        std::function<SuiteItem()> run;
    };
    const std::vector<Entry> entries = {
        {"values", [&] { return item_values(w0); }},
        {"rank-one", [&] { return item_rank_one(w0); }},
        {"polyconvexity", [&] { return item_polyconvexity(w0); }},
        {"adm-thresholds", [] { return item_adm_thresholds(); }},
        {"compactness", [&] { return item_compactness(w0); }},
        {"connectedness", [&] { return item_connectedness(w0); }},
        {"cross-method", [&] { return item_cross_method(w0); }},
    };

    SuiteResult result;
    for (const Entry& entry : entries) {
        if (!opt.only.empty() &&
            std::find(opt.only.begin(), opt.only.end(), entry.name) == opt.only.end()) {
            continue;
        }
        const Stopwatch sw;
        SuiteItem item;
        try {
            item = entry.run();
            item.name = entry.name;
        } catch (const std::exception& ex) {
            item.name = entry.name;
            item.pass = false;
            item.detail = std::string("exception: ") + ex.what();
        }
        if (opt.timings) item.wall_ms = sw.ms();
        result.items.push_back(std::move(item));
        if (!result.items.back().pass) result.all_pass = false;
    }
    if (result.items.empty()) {
        SuiteItem none;
        none.name = "no-items";
        none.pass = false;
        none.detail = "unknown --only filter";
        result.items.push_back(none);
        result.all_pass = false;
    }
    return result;
}

json suite_report_json(const SuiteResult& r) {
    json j;
    j["schema_version"] = 1;
    j["tool"] = "convexlab";
    j["check"] = "reproduce-paper";
    j["all_pass"] = r.all_pass;
    json items = json::array();
    for (const SuiteItem& item : r.items) {
        json ji;
        ji["name"] = item.name;
        ji["pass"] = item.pass;
        ji["detail"] = item.detail;
        if (item.wall_ms.has_value()) ji["wall_ms"] = *item.wall_ms;
        else ji["wall_ms"] = nullptr;
        ji["data"] = item.data;
        items.push_back(ji);
    }
    j["items"] = items;
    return j;
}

}  // namespace convexlab
