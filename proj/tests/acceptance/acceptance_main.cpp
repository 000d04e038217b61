// Acceptance suite: one line per criterion, exit code = number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "convexlab/builtin_energies.hpp"
#include "convexlab/polyconvexity.hpp"
#include "convexlab/rank_one.hpp"
#include "convexlab/report.hpp"
#include "convexlab/sublevel.hpp"

using namespace convexlab;

namespace {

struct Criterion {
    bool pass = true;
    std::string detail;
    double seconds = 0.0;

    void expect(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
    void budget(double limit) {
        if (seconds > limit) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            std::ostringstream os;
            os << "runtime " << seconds << " s exceeds " << limit << " s";
            detail += os.str();
        }
    }
};

template <typename Fn>
Criterion timed(Fn&& fn) {
    Criterion c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        fn(c);
    } catch (const std::exception& ex) {
        c.expect(false, std::string("exception: ") + ex.what());
    }
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return c;
}

Mat2 random_glp(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> entry(-2.0, 2.0);
    for (;;) {
        const Mat2 f(entry(rng), entry(rng), entry(rng), entry(rng));
        if (f.det() > 0.05) return f;
    }
}

}  // namespace

int main() {
    int failures = 0;
    auto report = [&failures](int index, const char* title, const Criterion& c) {
        std::printf("%s — criterion %d: %s (%.2f s)%s%s\n", c.pass ? "PASS" : "FAIL", index,
                    title, c.seconds, c.pass ? "" : " — ", c.pass ? "" : c.detail.c_str());
        if (!c.pass) ++failures;
    };

    const Energy w0 = make_w0();

    // 1. the empty-interval witness at gamma = (e^4, e^3), nu = (e, 1)
    {
        const Criterion c = [&] {
            Criterion cr = timed([&](Criterion& c) {
                const double e1 = std::exp(1.0), e3 = std::exp(3.0), e4 = std::exp(4.0);
                const CInterval iv = c_interval(w0.ordered, e4, e3);
                c.expect(std::fabs(iv.c_lo - (-0.00247958)) <= 1e-8,
                         "c_lo = " + format_double_shortest(iv.c_lo));
                const RequiredCBound rb = required_c_bound(w0.ordered, e4, e3, e1, 1.0);
                c.expect(std::fabs(rb.threshold - (-0.00377147)) <= 1e-8,
                         "required bound = " + format_double_shortest(rb.threshold));
                c.expect(rb.orientation == BoundOrientation::upper, "orientation flipped");
                const FalsifyResult fr =
                    polyconvexity_falsify(w0.ordered, default_gamma_grid(), default_nu_grid());
                c.expect(fr.falsified && fr.witness.has_value(), "no falsification witness");
            });
            cr.budget(1.0);
            return cr;
        }();
        report(1, "polyconvexity failure witness at the pinned points", c);
    }

    // 2. the split rank-one criterion for w0
    {
        const Criterion c = [&] {
            Criterion cr = timed([&](Criterion& c) {
                const SplitCriterionReport rep = split_rank_one_criterion(*w0.split);
                c.expect(std::fabs(rep.h0.value - 1.0) <= 1e-6,
                         "h0 = " + format_double_shortest(rep.h0.value));
                c.expect(std::fabs(rep.f0.value - (-1.0)) <= 1e-6,
                         "f0 = " + format_double_shortest(rep.f0.value));
                long points = 0;
                double worst = 0.0;
                for (double v : rep.iii_first_disjunct) {
                    if (std::isnan(v)) continue;
                    worst = std::max(worst, std::fabs(v));
                    ++points;
                }
                c.expect(points >= 2000, "only " + std::to_string(points) + " grid points");
                c.expect(worst <= 1e-10,
                         "condition iii first disjunct off zero by " + format_double_shortest(worst));
                c.expect(rep.condition_iv.worst_margin >= -1e-9,
                         "condition iv margin " + format_double_shortest(rep.condition_iv.worst_margin));
                c.expect(rep.overall, "overall verdict fail");
            });
            cr.budget(1.0);
            return cr;
        }();
        report(2, "split rank-one criterion suite", c);
    }

    // 3. quartic family threshold bracketing
    {
        const Criterion c = [&] {
            Criterion cr = timed([&](Criterion& c) {
                c.expect(rank_one_scan(make_adm(1.2).ordered).violation_found,
                         "no rank-one violation at gamma 1.2");
                c.expect(!rank_one_scan(make_adm(1.1).ordered).violation_found,
                         "spurious rank-one violation at gamma 1.1");
                c.expect(convexity_scan(make_adm(0.95).ordered).violation_found,
                         "no convexity violation at gamma 0.95");
                c.expect(!convexity_scan(make_adm(0.94).ordered).violation_found,
                         "spurious convexity violation at gamma 0.94");
            });
            cr.budget(30.0);
            return cr;
        }();
        report(3, "quartic family threshold bracketing", c);
    }

    // 4. compactness dichotomy
    {
        const Criterion c = [&] {
            Criterion cr = timed([&](Criterion& c) {
                for (double level : {3.0, 5.0, 10.0}) {
                    const CompactnessReport rep = compactness_check(*w0.split, level);
                    c.expect(rep.overall == Verdict::pass && rep.boundary_margin > 0.0,
                             "w0 compactness fails at c = " + format_double_human(level));
                }
                c.expect(compactness_check_probe(make_adm(1.1).ordered, 1.0).overall ==
                             Verdict::fail,
                         "restricted quartic family not flagged");
                c.expect(compactness_check_probe(make_aubert().ordered, 0.0).overall ==
                             Verdict::fail,
                         "quartic polynomial energy not flagged");
                c.expect(compactness_check_probe(make_silhavy().ordered, 2.0).overall ==
                             Verdict::fail,
                         "piecewise-linear energy not flagged");
            });
            cr.budget(5.0);
            return cr;
        }();
        report(4, "compactness dichotomy", c);
    }

    // 5. connectedness path constructions
    {
        const Criterion c = [&] {
            Criterion cr = timed([&](Criterion& c) {
                std::mt19937_64 rng(515u);
                int ok = 0;
                for (int i = 0; i < 100; ++i) {
                    const Mat2 f = random_glp(rng), ft = random_glp(rng);
                    const double level =
                        std::max(eval_matrix(w0.ordered, f), eval_matrix(w0.ordered, ft));
                    const SublevelPath path = connect_path(*w0.split, f, ft, level, i == 0);
                    const PathValidation pv = validate_path(w0.ordered, path);
                    bool good = pv.ok && pv.max_endpoint_gap <= 1e-10 &&
                                pv.max_energy_excess <= 1e-9;
                    for (const SegmentStats& st : pv.segments) {
                        if (st.kind == PathSegment::Kind::distortion_descent) {
                            good = good && st.det_drift <= 1e-12;
                        }
                        if (st.kind == PathSegment::Kind::conformal_scale) {
                            good = good && st.k_drift <= 1e-12;
                        }
                    }
                    if (good) ++ok;
                }
                c.expect(ok == 100, std::to_string(ok) + "/100 four-segment paths valid");

                const Energy aub = make_aubert();
                int aub_ok = 0;
                for (int i = 0; i < 50; ++i) {
                    const Mat2 f = random_glp(rng), ft = random_glp(rng);
                    const double level =
                        std::max(eval_matrix(aub.ordered, f), eval_matrix(aub.ordered, ft));
                    const SublevelPath path = aubert_connect_path(f, ft, level);
                    const PathValidation pv = validate_path(aub.ordered, path);
                    bool good = pv.ok && pv.segments.size() == 5;
                    if (good) {
                        const auto& segs = pv.segments;
                        if (!path.reversed) {
                            good = segs[1].max_energy_deriv <= 1e-7 &&
                                   segs[2].max_energy_deriv <= 1e-7 &&
                                   segs[3].min_energy_deriv >= -1e-7;
                        } else {
                            good = segs[3].min_energy_deriv >= -1e-7 &&
                                   segs[2].min_energy_deriv >= -1e-7 &&
                                   segs[1].max_energy_deriv <= 1e-7;
                        }
                    }
                    if (good) ++aub_ok;
                }
                c.expect(aub_ok == 50, std::to_string(aub_ok) + "/50 axis paths valid");
            });
            cr.budget(10.0);
            return cr;
        }();
        report(5, "connectedness path constructions", c);
    }

    // 6. flood-fill oracle agreement
    {
        const Criterion c = timed([&](Criterion& c) {
            for (double level : {2.1, 3.0, 5.0}) {
                DomainGrid coarse;
                DomainGrid fine;
                fine.n_u = fine.n_v = 241;
                const int c1 = grid_connectivity(w0.ordered, level, coarse).components;
                const int c2 = grid_connectivity(w0.ordered, level, fine).components;
                c.expect(c1 == 1, "w0 at c = " + format_double_human(level) +
                                      " has " + std::to_string(c1) + " components at 121^2");
                c.expect(c2 == 1, "w0 at c = " + format_double_human(level) +
                                      " has " + std::to_string(c2) + " components at 241^2");
                c.expect(c1 == c2, "component count unstable under resolution doubling");
            }
            const int ca = grid_connectivity(make_aubert().ordered, 0.0, DomainGrid{}).components;
            c.expect(ca == 1, "quartic energy at c = 0 has " + std::to_string(ca) + " components");
        });
        report(6, "flood-fill connectivity oracle", c);
    }

    // 7. cross-method consistency
    {
        const Criterion c = timed([&](Criterion& c) {
            const ScanResult mc_w0 = rank_one_monte_carlo(w0.ordered, 10000);
            c.expect(!mc_w0.violation_found && mc_w0.min_second_difference >= -1e-8,
                     "w0 Monte-Carlo min " +
                         format_double_shortest(mc_w0.min_second_difference));
            const ScanResult mc_aub = rank_one_monte_carlo(make_aubert().ordered, 10000);
            c.expect(!mc_aub.violation_found && mc_aub.min_second_difference >= -1e-8,
                     "quartic energy Monte-Carlo min " +
                         format_double_shortest(mc_aub.min_second_difference));

            OrderedSVEnergy sq;
            sq.name = "frobenius-squared";
            sq.value = [](double a, double b) { return a * a + b * b; };
            sq.d1 = [](double a, double) { return 2.0 * a; };
            sq.d2 = [](double, double b) { return 2.0 * b; };
            const FalsifyResult fr =
                polyconvexity_falsify(sq, default_gamma_grid(), default_nu_grid());
            c.expect(!fr.falsified, "convex energy falsified");
            double worst = 0.0;
            for (double g1 : {0.6, 1.2, 2.0}) {
                for (double n1 : {0.4, 1.0, 3.0}) {
                    worst = std::min(worst, minorant_residual(sq, g1 + 0.5, g1, n1 + 0.3, n1, 0.0));
                }
            }
            c.expect(worst >= -1e-12, "tangent minorant with c = 0 failed");
        });
        report(7, "cross-method consistency", c);
    }

    // 8. the CLI reproduce-paper run: exit code, budget, schema round-trip
    {
        const Criterion c = [&] {
            Criterion cr = timed([&](Criterion& c) {
                const std::string cli = CONVEXLAB_CLI_PATH;
                const std::string out1 = "acceptance_report_1.json";
                const std::string out2 = "acceptance_report_2.json";
                const std::string cmd1 = cli + " reproduce-paper --out " + out1 + " >/dev/null";
                const std::string cmd2 = cli + " reproduce-paper --out " + out2 + " >/dev/null";
                const int rc1 = std::system(cmd1.c_str());
                c.expect(rc1 == 0, "reproduce-paper exit status " + std::to_string(rc1));
                const int rc2 = std::system(cmd2.c_str());
                c.expect(rc2 == 0, "second run exit status " + std::to_string(rc2));

                auto slurp = [](const std::string& path) {
                    std::ifstream in(path);
                    std::stringstream ss;
                    ss << in.rdbuf();
                    return ss.str();
                };
                const std::string text1 = slurp(out1);
                const std::string text2 = slurp(out2);
                c.expect(!text1.empty(), "no report written");
                c.expect(text1 == text2, "reports differ between identical runs");

                const nlohmann::json parsed = nlohmann::json::parse(text1);
                c.expect(parsed.at("schema_version") == 1, "schema_version mismatch");
                c.expect(parsed.at("all_pass") == true, "suite reports failures");
                // round-trip: parse -> dump -> parse -> dump must be stable
                const std::string dumped = parsed.dump(2) + "\n";
                c.expect(nlohmann::json::parse(dumped).dump(2) + "\n" == dumped,
                         "schema does not round-trip");
                c.expect(text1 == dumped, "serialized report differs from its round-trip");

                // spot-check the CLI eval contract and exit codes
                const int ev = std::system((cli + " eval --energy w0 --matrix 1,0,0,1 "
                                                  "> acceptance_eval.txt").c_str());
                c.expect(ev == 0, "eval exit status");
                c.expect(slurp("acceptance_eval.txt") == "2\n", "eval output for the identity");
                const int ev_aub = std::system((cli + " eval --energy aubert --matrix 1,0,0,1 "
                                                      "> acceptance_eval.txt").c_str());
                c.expect(ev_aub == 0 &&
                             std::fabs(std::strtod(slurp("acceptance_eval.txt").c_str(), nullptr) -
                                       (-1.0 / 6.0)) < 1e-12,
                         "quartic energy value at the identity");
                const int ev_adm = std::system((cli + " eval --energy adm:1.1 --matrix 1,0,0,1 "
                                                      "> acceptance_eval.txt").c_str());
                c.expect(ev_adm == 0 &&
                             std::fabs(std::strtod(slurp("acceptance_eval.txt").c_str(), nullptr) -
                                       (-0.4)) < 1e-12,
                         "one-parameter family value at the identity");
                const int usage = std::system((cli + " eval --matrix oops 2>/dev/null").c_str());
                c.expect(WEXITSTATUS(usage) == 2, "usage errors must exit 2");
                const int dom = std::system(
                    (cli + " eval --energy w0 --matrix 1,0,0,-1 2>/dev/null").c_str());
                c.expect(WEXITSTATUS(dom) == 3, "domain errors must exit 3");
                const int refuse = std::system(
                    (cli + " check rank-one --energy aubert --method split 2>/dev/null").c_str());
                c.expect(WEXITSTATUS(refuse) == 3, "refusal errors must exit 3");

                // --only runs a single item; a broken substitute energy must fail the suite
                const int only = std::system(
                    (cli + " reproduce-paper --only polyconvexity >/dev/null").c_str());
                c.expect(only == 0, "--only polyconvexity exit status");
                {
                    std::ofstream bad("acceptance_tampered.energy");
                    bad << "name w0-tampered\nhhat t - log(t)\nf log(t)\n";
                }
                const int tampered = std::system(
                    (cli + " reproduce-paper --only compactness --w0-file "
                           "acceptance_tampered.energy >/dev/null").c_str());
                c.expect(WEXITSTATUS(tampered) == 1, "tampered volumetric part must fail the suite");
            });
            cr.budget(60.0);
            return cr;
        }();
        report(8, "reproduce-paper completes and round-trips", c);
    }

    if (failures == 0) std::printf("acceptance: all 8 criteria passed\n");
    else std::printf("acceptance: %d criterion(s) failed\n", failures);
    return failures;
}
