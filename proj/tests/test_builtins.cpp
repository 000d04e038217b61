#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "convexlab/builtin_energies.hpp"
#include "test_util.hpp"

using namespace convexlab;
using namespace convexlab::test;

TEST_CASE("w0 registered values") {
    const Energy w0 = make_w0();
    CHECK(eval_matrix(w0.ordered, Mat2::identity()) == doctest::Approx(2.0));
    CHECK(eval_ordered(w0.ordered, std::exp(4.0), std::exp(3.0)) ==
          doctest::Approx(std::exp(1.0) + 6.0 + std::exp(-7.0)).epsilon(1e-13));
    CHECK(eval_ordered(w0.ordered, std::exp(1.0), 1.0) ==
          doctest::Approx(std::exp(1.0) + std::exp(-1.0)).epsilon(1e-13));
    CHECK(w0.split->h0_closed_form.value() == 1.0);
    CHECK(w0.split->f0_closed_form.value() == -1.0);
    CHECK(w0.split->growth->h_at_inf);
    CHECK(w0.split->growth->f_at_inf);
    CHECK(w0.split->growth->f_at_zero);
}

TEST_CASE("w0 grows along the shrinking conformal ray") {
    const Energy w0 = make_w0();
    double prev = eval_matrix(w0.ordered, Mat2::identity() * 0.5);
    for (int n = 3; n <= 40; ++n) {
        const double v = eval_matrix(w0.ordered, Mat2::identity() * (1.0 / n));
        CHECK(v > prev);
        prev = v;
    }
    CHECK(prev > 1e3 - 10.0);  // n = 40: det = 1/1600, f ~ 1600
}

TEST_CASE("aubert matches the diagonal closed form") {
    const Energy aub = make_aubert();
    for (double t : {0.5, 1.0, 1.7, 2.5}) {
        CHECK(eval_matrix(aub.ordered, Mat2::diag(t, t)) ==
              doctest::Approx(-t * t * t * t / 6.0).epsilon(1e-12));
    }
    CHECK(eval_matrix(aub.ordered, Mat2::identity()) == doctest::Approx(-1.0 / 6.0));
}

TEST_CASE("aubert matrix and singular-value forms agree") {
    const Energy aub = make_aubert();
    auto rng = make_rng(53u);
    for (int i = 0; i < 1000; ++i) {
        const Mat2 f = random_glp2(rng);
        const double via_matrix = aub.ordered.matrix_form(f);
        const double via_sv = eval_matrix(aub.ordered, f);
        CHECK(via_matrix == doctest::Approx(via_sv).epsilon(1e-10));
    }
}

TEST_CASE("adm closed forms and scaling limit") {
    for (double gamma : {0.5, 1.0, 1.1}) {
        const Energy adm_e = make_adm(gamma);
        for (double a : {0.5, 1.0, 2.0}) {
            CHECK(eval_matrix(adm_e.ordered, Mat2::identity() * a) ==
                  doctest::Approx(4.0 * a * a * a * a * (1.0 - gamma)).epsilon(1e-12));
        }
    }
    // gamma = 0 reduces to ||F||^4 >= 0
    const Energy adm0 = make_adm(0.0);
    auto rng = make_rng(59u);
    for (int i = 0; i < 200; ++i) {
        const Mat2 f = random_mat2(rng);
        const double n2 = f.a11 * f.a11 + f.a12 * f.a12 + f.a21 * f.a21 + f.a22 * f.a22;
        CHECK(adm0.ordered.matrix_form(f) == doctest::Approx(n2 * n2).epsilon(1e-12));
        CHECK(adm0.ordered.matrix_form(f) >= 0.0);
    }
    // W((1/n) id) -> 0
    const Energy adm11 = make_adm(1.1);
    double prev = std::fabs(eval_matrix(adm11.ordered, Mat2::identity() * 0.5));
    for (int n = 4; n <= 64; n *= 2) {
        const double v = std::fabs(eval_matrix(adm11.ordered, Mat2::identity() * (1.0 / n)));
        CHECK(v < prev);
        prev = v;
    }
    CHECK(prev < 1e-6);
}

TEST_CASE("adm matrix and singular-value forms agree") {
    const Energy adm_e = make_adm(0.8);
    auto rng = make_rng(61u);
    for (int i = 0; i < 1000; ++i) {
        const Mat2 f = random_glp2(rng);
        CHECK(adm_e.ordered.matrix_form(f) ==
              doctest::Approx(eval_matrix(adm_e.ordered, f)).epsilon(1e-10));
    }
}

TEST_CASE("adm gamma sign flip under orientation reversal") {
    const double gamma = 0.7;
    const Energy pos = make_adm(gamma);
    const Energy neg = make_adm(-gamma);
    auto rng = make_rng(67u);
    const Mat2 flip = Mat2::diag(1.0, -1.0);
    for (int i = 0; i < 200; ++i) {
        const Mat2 f = random_mat2(rng);
        CHECK(pos.ordered.matrix_form(flip * f) ==
              doctest::Approx(neg.ordered.matrix_form(f)).epsilon(1e-12));
    }
}

TEST_CASE("silhavy branches, seam continuity, boundedness") {
    const Energy sil = make_silhavy();
    CHECK(eval_ordered(sil.ordered, 0.5, 0.5) == doctest::Approx(0.25));
    CHECK(eval_ordered(sil.ordered, 2.0, 1.0) == doctest::Approx(2.0));
    for (double b : {0.2, 0.6, 1.0}) {
        const double below = sil.ordered.value(1.0 - 1e-12, b);
        const double above = sil.ordered.value(1.0 + 1e-12, b);
        CHECK(below == doctest::Approx(b).epsilon(1e-9));
        CHECK(above == doctest::Approx(b).epsilon(1e-9));
    }
    // bounded on {det <= 1, ||F|| <= 2}
    double max_val = -1e18;
    for (int i = 0; i <= 60; ++i) {
        for (int j = 0; j <= 60; ++j) {
            const double l1 = 1e-3 + (2.0 - 1e-3) * i / 60.0;
            const double l2 = 1e-3 + (l1 - 1e-3) * j / 60.0;
            if (l1 * l2 > 1.0 || l1 * l1 + l2 * l2 > 4.0) continue;
            max_val = std::max(max_val, sil.ordered.value(l1, l2));
        }
    }
    CHECK(max_val < 3.0);
    CHECK(max_val > 0.0);
}

TEST_CASE("lookup_energy resolves names and rejects junk") {
    CHECK(lookup_energy("w0").name == "w0");
    CHECK(lookup_energy("aubert").name == "aubert");
    CHECK(lookup_energy("silhavy").name == "silhavy");
    const Energy adm_e = lookup_energy("adm:1.25");
    CHECK(eval_matrix(adm_e.ordered, Mat2::identity()) == doctest::Approx(4.0 * (1.0 - 1.25)));
    CHECK_THROWS_AS(lookup_energy("nope"), std::invalid_argument);
    CHECK_THROWS_AS(lookup_energy("adm:abc"), std::invalid_argument);
    CHECK_THROWS_AS(lookup_energy("adm:1.2xyz"), std::invalid_argument);
}

TEST_CASE("registration validates analytic partials on a grid") {
    // all four builtins must clear the 1e-6 relative validation threshold
    DomainGrid grid;
    CHECK(validate_partials(make_w0().ordered, grid).ok);
    CHECK(validate_partials(make_aubert().ordered, grid).ok);
    CHECK(validate_partials(make_adm(1.1).ordered, grid).ok);
    CHECK(validate_partials(make_silhavy().ordered, grid).ok);
}
