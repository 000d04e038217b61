#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "convexlab/builtin_energies.hpp"
#include "convexlab/sublevel.hpp"
#include "test_util.hpp"

using namespace convexlab;
using namespace convexlab::test;

TEST_CASE("growth_check verdicts") {
    CHECK(growth_check([](double t) { return t - std::log(t); }, GrowthDirection::to_infinity)
              .verdict == Verdict::pass);
    CHECK(growth_check([](double t) { return std::log(t) + 1.0 / t; }, GrowthDirection::to_zero)
              .verdict == Verdict::pass);
    // the volumetric part grows only logarithmically towards infinity
    CHECK(growth_check([](double t) { return std::log(t) + 1.0 / t; },
                       GrowthDirection::to_infinity).verdict == Verdict::pass);

    const GrowthVerdict fail0 = growth_check([](double t) { return t; }, GrowthDirection::to_zero);
    CHECK(fail0.verdict == Verdict::fail);
    CHECK(fail0.counter_value < 1.0);

    // bounded above: increments die off
    CHECK(growth_check([](double t) { return 20.0 * t / (1.0 + t); },
                       GrowthDirection::to_infinity).verdict == Verdict::fail);
    // decreasing
    CHECK(growth_check([](double t) { return -t; }, GrowthDirection::to_infinity).verdict ==
          Verdict::fail);
}

TEST_CASE("compactness of w0 with explicit bounds") {
    const Energy w0 = make_w0();
    const CompactnessReport rep = compactness_check(*w0.split, 5.0);
    REQUIRE(rep.overall == Verdict::pass);
    CHECK(rep.radius >= 1.0);
    CHECK(rep.boundary_margin > 0.0);
    CHECK(rep.boundary_margin <= 1.0);
    CHECK(rep.lower_bound_d == doctest::Approx(1.0).epsilon(1e-6));

    // brute-force sweep: no sublevel point outside the radius or below the margin
    const auto& g = w0.ordered.value;
    for (double u = -6.0; u <= 6.0; u += 0.05) {
        for (double v = -6.0; v <= u + 1e-12; v += 0.05) {
            const double l1 = std::exp(u), l2 = std::exp(v);
            if (g(l1, l2) <= 5.0) {
                CHECK(l1 <= rep.radius + 1e-9);       // operator norm inside the radius
                CHECK(l2 >= rep.boundary_margin - 1e-9);
            }
        }
    }
}

TEST_CASE("compactness failures carry counter-samples") {
    const CompactnessReport adm = compactness_check_probe(make_adm(1.1).ordered, 1.0);
    CHECK(adm.overall == Verdict::fail);
    CHECK(adm.f_at_zero.verdict == Verdict::fail);
    CHECK(adm.f_at_zero.counter_value <= 1.0);  // the conformal ray enters S_1 near det = 0

    const CompactnessReport aub = compactness_check_probe(make_aubert().ordered, 0.0);
    CHECK(aub.overall == Verdict::fail);
    CHECK(aub.f_at_inf.verdict == Verdict::fail);

    const CompactnessReport sil = compactness_check_probe(make_silhavy().ordered, 2.0);
    CHECK(sil.overall == Verdict::fail);
    CHECK(sil.f_at_zero.verdict == Verdict::fail);
}

TEST_CASE("tampered volumetric part breaks compactness") {
    VolIsoSplitEnergy tampered = w0_split();
    tampered.name = "w0-tampered";
    tampered.volumetric.value = [](double t) { return std::log(t); };
    tampered.volumetric.deriv = [](double t) { return 1.0 / t; };
    tampered.volumetric.deriv2 = [](double t) { return -1.0 / (t * t); };
    tampered.growth.reset();
    tampered.h0_closed_form.reset();
    tampered.f0_closed_form.reset();
    const CompactnessReport rep = compactness_check(tampered, 5.0);
    CHECK(rep.overall == Verdict::fail);
    CHECK(rep.f_at_zero.verdict == Verdict::fail);  // log t -> -inf as t -> 0
}

TEST_CASE("connect_path on identical endpoints") {
    const Energy w0 = make_w0();
    const SublevelPath path = connect_path(*w0.split, Mat2::identity(), Mat2::identity(), 2.0);
    const PathValidation pv = validate_path(w0.ordered, path);
    CHECK(pv.ok);
    CHECK(pv.max_energy_excess <= 1e-12);  // every sample sits at the minimum value 2
}

TEST_CASE("connect_path keeps det constant along the distortion segment") {
    const Energy w0 = make_w0();
    const Mat2 f = Mat2::diag(4.0, 1.0);
    const Mat2 ft = Mat2::diag(2.0, 1.0);
    const double c = std::max(eval_matrix(w0.ordered, f), eval_matrix(w0.ordered, ft));
    const SublevelPath path = connect_path(*w0.split, f, ft, c);
    const PathValidation pv = validate_path(w0.ordered, path);
    CHECK(pv.ok);
    bool saw_distortion = false;
    for (const SegmentStats& st : pv.segments) {
        if (st.kind == PathSegment::Kind::distortion_descent) {
            saw_distortion = true;
            CHECK(st.det_drift <= 1e-12);
        }
        if (st.kind == PathSegment::Kind::conformal_scale) CHECK(st.k_drift <= 1e-12);
        if (st.kind == PathSegment::Kind::rotation_interp) CHECK(st.energy_drift <= 1e-12);
    }
    CHECK(saw_distortion);
}

TEST_CASE("connect_path on random rotated endpoints") {
    const Energy w0 = make_w0();
    auto rng = make_rng(79u);
    const Mat2 f = rotation(uniform(rng, -3.0, 3.0)) * Mat2::diag(3.0, 1.0) *
                   rotation(uniform(rng, -3.0, 3.0));
    const Mat2 ft = Mat2::diag(1.0, 0.5);
    const double c = std::max(eval_matrix(w0.ordered, f), eval_matrix(w0.ordered, ft));
    const SublevelPath path = connect_path(*w0.split, f, ft, c);
    const PathValidation pv = validate_path(w0.ordered, path, 200);
    CHECK(pv.ok);
    CHECK(pv.max_energy_excess <= 1e-9);
    CHECK(pv.max_endpoint_gap <= 1e-10);
    // endpoints are hit exactly
    CHECK(max_abs_diff(path.segments.front().eval(0.0), f) < 1e-12);
    CHECK(max_abs_diff(path.segments.back().eval(1.0), ft) < 1e-12);
}

TEST_CASE("connect_path honours the K-ordering WLOG by swap-and-reverse") {
    const Energy w0 = make_w0();
    const Mat2 f = Mat2::diag(1.2, 1.0);   // small distortion
    const Mat2 ft = Mat2::diag(5.0, 1.0);  // large distortion
    const double c = std::max(eval_matrix(w0.ordered, f), eval_matrix(w0.ordered, ft));
    const SublevelPath path = connect_path(*w0.split, f, ft, c);
    CHECK(path.reversed);
    CHECK(max_abs_diff(path.segments.front().eval(0.0), f) < 1e-12);
    CHECK(max_abs_diff(path.segments.back().eval(1.0), ft) < 1e-12);
    CHECK(validate_path(w0.ordered, path).ok);
}

TEST_CASE("connect_path rejects endpoints outside the sublevel set") {
    const Energy w0 = make_w0();
    CHECK_THROWS_AS(connect_path(*w0.split, Mat2::diag(10.0, 0.1), Mat2::identity(), 2.5),
                    PreconditionError);
}

TEST_CASE("connect_path verifies the hypotheses") {
    // f(t) = sin t is not q-convex; the hypothesis check must refuse
    VolIsoSplitEnergy wavy = w0_split();
    wavy.name = "wavy";
    wavy.volumetric.value = [](double t) { return std::sin(t); };
    wavy.volumetric.deriv = nullptr;
    wavy.volumetric.deriv2 = nullptr;
    wavy.growth.reset();
    wavy.h0_closed_form.reset();
    wavy.f0_closed_form.reset();
    CHECK_THROWS_AS(
        connect_path(wavy, Mat2::identity(), Mat2::identity() * 1.1, 10.0, true),
        PreconditionError);
}

TEST_CASE("aubert path segments carry the expected monotonicity") {
    const Energy aub = make_aubert();
    const Mat2 f = Mat2::diag(1.0, 0.5);
    const Mat2 ft = Mat2::diag(2.0, 1.0);
    const double c = std::max(eval_matrix(aub.ordered, f), eval_matrix(aub.ordered, ft));
    const SublevelPath path = aubert_connect_path(f, ft, c);
    const PathValidation pv = validate_path(aub.ordered, path);
    CHECK(pv.ok);
    REQUIRE(pv.segments.size() == 5);
    CHECK(pv.segments[1].max_energy_deriv <= 1e-7);   // raising the small axis descends
    CHECK(pv.segments[2].max_energy_deriv <= 1e-7);   // the conformal ray descends
    CHECK(pv.segments[3].min_energy_deriv >= -1e-7);  // descending the axis ascends the energy
}

TEST_CASE("aubert path handles the degenerate conformal case") {
    const Energy aub = make_aubert();
    const Mat2 f = Mat2::diag(1.3, 1.3);
    const double c = eval_matrix(aub.ordered, f);
    const SublevelPath path = aubert_connect_path(f, f, c + 1e-12);
    const PathValidation pv = validate_path(aub.ordered, path);
    CHECK(pv.ok);
    CHECK(pv.max_energy_excess <= 1e-9);
}

TEST_CASE("q-convexity verdicts") {
    CHECK(q_convexity_1d([](double t) { const double l = std::log(t); return l * l; },
                         log_samples(1e-3, 1e3, 500)).verdict == Verdict::pass);
    CHECK(q_convexity_1d([](double t) { return std::log(t) + 1.0 / t; },
                         log_samples(1e-3, 1e3, 500)).verdict == Verdict::pass);

    std::vector<double> lin(400);
    for (std::size_t i = 0; i < lin.size(); ++i) {
        lin[i] = 1e-3 + (4.0 * M_PI - 2e-3) * i / (lin.size() - 1);
    }
    const QConvexityResult r = q_convexity_1d([](double t) { return std::sin(t); }, lin);
    CHECK(r.verdict == Verdict::fail);
    CHECK(r.witness_a < r.witness_t);
    CHECK(r.witness_t < r.witness_b);
    CHECK(std::sin(r.witness_t) > std::sin(r.witness_a));
    CHECK(std::sin(r.witness_t) > std::sin(r.witness_b));
}

TEST_CASE("grid connectivity of w0") {
    const Energy w0 = make_w0();
    DomainGrid grid;
    CHECK(grid_connectivity(w0.ordered, 1.9, grid).components == 0);  // below the minimum 2
    const ConnectivityResult c3 = grid_connectivity(w0.ordered, 3.0, grid);
    CHECK(c3.components == 1);
    CHECK(c3.in_set > 0);

    DomainGrid doubled;
    doubled.n_u = doubled.n_v = 241;
    CHECK(grid_connectivity(w0.ordered, 3.0, doubled).components == 1);
}

TEST_CASE("grid connectivity of the quartic energy at level zero") {
    const Energy aub = make_aubert();
    DomainGrid grid;
    const ConnectivityResult r = grid_connectivity(aub.ordered, 0.0, grid);
    CHECK(r.components == 1);
    // the conformal ray lies inside S_0, so the set reaches the grid corner
    CHECK(r.in_set > 100);
}

TEST_CASE("grid connectivity separates an artificial two-valley energy") {
    // two wells in log-radius, far apart: the middle ridge disconnects them
    OrderedSVEnergy wells;
    wells.name = "two-wells";
    wells.value = [](double a, double b) {
        const double r = std::log(a * b);
        const double w1 = (r + 3.0) * (r + 3.0);
        const double w2 = (r - 3.0) * (r - 3.0);
        return std::min(w1, w2);
    };
    DomainGrid grid;
    const ConnectivityResult r = grid_connectivity(wells, 0.5, grid);
    CHECK(r.components == 2);
}
