#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "convexlab/builtin_energies.hpp"
#include "convexlab/expr.hpp"
#include "convexlab/rank_one.hpp"
#include "test_util.hpp"

using namespace convexlab;
using namespace convexlab::test;

TEST_CASE("infimum of t^2 g'' for the w0 split") {
    const Energy w0 = make_w0();
    const ScalarFn h = unordered_h_fn(*w0.split);
    const InfimumResult h0 = infimum_t2_g2(h, {}, w0.split->h0_closed_form);
    CHECK(h0.value == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(h0.agrees_with_closed_form);

    const InfimumResult f0 = infimum_t2_g2(w0.split->volumetric, {}, w0.split->f0_closed_form);
    CHECK(f0.value == doctest::Approx(-1.0).epsilon(1e-6));
    CHECK(f0.at_boundary);  // approached as t -> infinity
    CHECK(f0.agrees_with_closed_form);
}

TEST_CASE("infimum flags a boundary-limit case") {
    ScalarFn square;
    square.value = [](double t) { return t * t; };
    square.deriv2 = [](double) { return 2.0; };
    const InfimumResult r = infimum_t2_g2(square);
    // t^2 * 2 decreases to 0 at the lower grid edge
    CHECK(r.at_boundary);
    CHECK(r.value >= 0.0);
    CHECK(r.value < 1e-6);
}

TEST_CASE("infimum refuses non-C2 claims") {
    ScalarFn rough;
    rough.value = [](double t) { return std::fabs(t - 1.0); };
    rough.smoothness = Smoothness::c0;
    CHECK_THROWS_AS(infimum_t2_g2(rough), RefusalError);
}

TEST_CASE("split criterion passes for w0") {
    const Energy w0 = make_w0();
    const SplitCriterionReport rep = split_rank_one_criterion(*w0.split);
    CHECK(rep.overall);
    CHECK(rep.condition_i);
    CHECK(rep.condition_i_margin == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(rep.condition_ii.pass);
    CHECK(rep.condition_iii.pass);
    CHECK(rep.condition_iv.pass);
    CHECK_FALSE(rep.f_unbounded_below);

    // the first disjunct of iii vanishes identically on both branches
    long below = 0, above = 0;
    for (std::size_t i = 0; i < rep.grid_t.size(); ++i) {
        const double v = rep.iii_first_disjunct[i];
        if (std::isnan(v)) continue;
        CHECK(std::fabs(v) <= 1e-10);
        if (rep.grid_t[i] < 1.0) ++below;
        else ++above;
    }
    CHECK(below > 900);
    CHECK(above > 900);
}

TEST_CASE("condition iv values match the closed-form branches") {
    // (2t/(t+1)) h' + t^2 h'' - f0 equals 2((t-1)/(t+1) + 1) above 1 and 4/(t+1) below
    const Energy w0 = make_w0();
    for (double t : {1.5, 3.0, 10.0}) {
        const double hp = unordered_h_deriv(*w0.split, t);
        const double hpp = unordered_h_deriv2(*w0.split, t);
        const double lhs = (2.0 * t / (t + 1.0)) * hp + t * t * hpp + 1.0;
        CHECK(lhs == doctest::Approx(2.0 * ((t - 1.0) / (t + 1.0) + 1.0)).epsilon(1e-12));
    }
    for (double t : {0.2, 0.5, 0.9}) {
        const double hp = unordered_h_deriv(*w0.split, t);
        const double hpp = unordered_h_deriv2(*w0.split, t);
        const double lhs = (2.0 * t / (t + 1.0)) * hp + t * t * hpp + 1.0;
        CHECK(lhs == doctest::Approx(4.0 / (t + 1.0)).epsilon(1e-12));
    }
}

TEST_CASE("split criterion fails an energy with unbounded-below volumetric curvature") {
    VolIsoSplitEnergy bad;
    bad.name = "linear-iso-negative-quadratic-vol";
    bad.isochoric.value = [](double t) { return t; };
    bad.isochoric.deriv = [](double) { return 1.0; };
    bad.isochoric.deriv2 = [](double) { return 0.0; };
    bad.isochoric.domain_min = 1.0;
    bad.volumetric.value = [](double t) { return -t * t; };
    bad.volumetric.deriv = [](double t) { return -2.0 * t; };
    bad.volumetric.deriv2 = [](double) { return -2.0; };
    const SplitCriterionReport rep = split_rank_one_criterion(bad);
    CHECK_FALSE(rep.condition_i);
    CHECK(rep.f_unbounded_below);
    CHECK_FALSE(rep.overall);
}

TEST_CASE("split criterion refuses non-C2 components") {
    VolIsoSplitEnergy rough;
    rough.name = "rough";
    rough.isochoric.value = [](double t) { return t; };
    rough.isochoric.smoothness = Smoothness::c0;
    rough.isochoric.domain_min = 1.0;
    rough.volumetric.value = [](double t) { return t; };
    CHECK_THROWS_AS(split_rank_one_criterion(rough), RefusalError);
}

TEST_CASE("second differences along rank-one lines of a convex energy") {
    OrderedSVEnergy sq;
    sq.name = "frobenius-squared";
    sq.value = [](double a, double b) { return a * a + b * b; };
    auto rng = make_rng(71u);
    for (int i = 0; i < 300; ++i) {
        const Mat2 f = random_glp2(rng);
        const RankOneDir d{uniform(rng, 0.0, M_PI), uniform(rng, 0.0, M_PI), 1.0};
        const Mat2 h = rank_one_matrix(d);
        // keep the stencil inside GL+(2)
        const double c1 = inner(f.cofactor(), h);
        double t = 0.0, step = 0.05;
        if (std::fabs(c1) > 1e-9) {
            const double edge = -f.det() / c1;
            if (std::fabs(edge) < 0.3) t = edge + (edge > 0 ? -0.4 : 0.4);
        }
        if (!(f.det() + (t - step) * c1 > 0.0) || !(f.det() + (t + step) * c1 > 0.0)) continue;
        CHECK(rank_one_second_difference(sq, f, d, t, step) >= -1e-8);
    }
}

TEST_CASE("second difference reports the offending endpoint") {
    const Energy w0 = make_w0();
    const RankOneDir d{0.0, 0.0, 1.0};
    // from the identity along e1 e1^T, det(I + s H) = 1 + s hits zero at s = -1
    CHECK_THROWS_AS(rank_one_second_difference(w0.ordered, Mat2::identity(), d, -1.0, 0.1),
                    std::domain_error);
    CHECK_NOTHROW(rank_one_second_difference(w0.ordered, Mat2::identity(), d, 0.5, 0.1));
}

TEST_CASE("scan and split agree on w0") {
    const Energy w0 = make_w0();
    const SplitCriterionReport split = split_rank_one_criterion(*w0.split);
    RankOneScanGrid light;
    light.theta_samples = 12;
    light.phi_samples = 12;
    light.refine_iterations = 20;
    const ScanResult scan = rank_one_scan(w0.ordered, light);
    CHECK(split.overall);
    CHECK_FALSE(scan.violation_found);
}

TEST_CASE("scan brackets the quartic family's rank-one threshold") {
    const ScanResult hit = rank_one_scan(make_adm(1.2).ordered);
    CHECK(hit.violation_found);
    REQUIRE(hit.witness.has_value());
    CHECK(hit.witness->second_difference < -1e-6);

    const ScanResult miss = rank_one_scan(make_adm(1.1).ordered);
    CHECK_FALSE(miss.violation_found);
    CHECK(miss.min_second_difference > -1e-6);
}

TEST_CASE("convexity scan brackets the quartic family's convexity threshold") {
    const ScanResult hit = convexity_scan(make_adm(0.95).ordered);
    CHECK(hit.violation_found);
    const ScanResult miss = convexity_scan(make_adm(0.94).ordered);
    CHECK_FALSE(miss.violation_found);
    // convexity breaks before rank-one convexity does
    const ScanResult rank = rank_one_scan(make_adm(0.95).ordered);
    CHECK_FALSE(rank.violation_found);
}

TEST_CASE("convexity scan needs an unrestricted matrix form") {
    const Energy w0 = make_w0();
    CHECK_THROWS_AS(convexity_scan(w0.ordered), PreconditionError);
}

TEST_CASE("monte carlo sampling stays clean on the rank-one convex energies") {
    const Energy w0 = make_w0();
    const ScanResult mc = rank_one_monte_carlo(w0.ordered, 2000);
    CHECK_FALSE(mc.violation_found);
    CHECK(mc.min_second_difference >= -1e-8);
    CHECK(mc.samples == 2000);
}

TEST_CASE("aubert scans clean") {
    RankOneScanGrid light;
    light.theta_samples = 12;
    light.phi_samples = 12;
    light.refine_iterations = 20;
    const ScanResult r = rank_one_scan(make_aubert().ordered, light);
    CHECK_FALSE(r.violation_found);
}

TEST_CASE("file-loaded energies run the split criterion at FD resolution") {
    // same functions as the builtin, but with numeric derivatives only: the
    // margins sit on the FD noise floor instead of at exact zero
    const VolIsoSplitEnergy clone = split_energy_from_file(parse_energy_file_text(
        "name w0-clone\nhhat t - log(t)\nf log(t) + 1/t\n"));
    const SplitCriterionReport rep = split_rank_one_criterion(clone);
    CHECK(rep.fd_derivatives);
    CHECK(rep.h0.fd_limited);
    CHECK(rep.h0.value == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(rep.f0.value == doctest::Approx(-1.0).epsilon(1e-3));
    CHECK(rep.overall);

    // a genuinely broken energy still fails loudly through the same path
    const VolIsoSplitEnergy bad = split_energy_from_file(parse_energy_file_text(
        "name bad\nhhat t\nf -(t^2)\n"));
    const SplitCriterionReport rb = split_rank_one_criterion(bad);
    CHECK_FALSE(rb.condition_i);
    CHECK(rb.f_unbounded_below);
    CHECK_FALSE(rb.overall);
}

TEST_CASE("scan results do not depend on the worker count") {
    const Energy adm_e = make_adm(1.2);
    setenv("CONVEXLAB_THREADS", "1", 1);
    const ScanResult serial = rank_one_scan(adm_e.ordered);
    setenv("CONVEXLAB_THREADS", "4", 1);
    const ScanResult parallel = rank_one_scan(adm_e.ordered);
    unsetenv("CONVEXLAB_THREADS");
    CHECK(serial.violation_found == parallel.violation_found);
    CHECK(serial.min_second_difference == parallel.min_second_difference);
    REQUIRE(serial.witness.has_value());
    REQUIRE(parallel.witness.has_value());
    CHECK(serial.witness->t == parallel.witness->t);
    CHECK(serial.witness->second_difference == parallel.witness->second_difference);
    CHECK(serial.witness->base.a11 == parallel.witness->base.a11);
    CHECK(serial.witness->base.a22 == parallel.witness->base.a22);
}
