#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "convexlab/expr.hpp"

using namespace convexlab;

namespace {
double ev(const char* src, double t) { return eval_expr(*parse_expression(src), t); }
}  // namespace

TEST_CASE("arithmetic and precedence") {
    CHECK(ev("1 + 2 * 3", 0.0) == doctest::Approx(7.0));
    CHECK(ev("(1 + 2) * 3", 0.0) == doctest::Approx(9.0));
    CHECK(ev("2 - 3 - 4", 0.0) == doctest::Approx(-5.0));
    CHECK(ev("12 / 3 / 2", 0.0) == doctest::Approx(2.0));
    CHECK(ev("-t", 2.5) == doctest::Approx(-2.5));
    CHECK(ev("--t", 2.5) == doctest::Approx(2.5));
    CHECK(ev("2 ^ 3 ^ 2", 0.0) == doctest::Approx(512.0));  // right associative
    CHECK(ev("-2 ^ 2", 0.0) == doctest::Approx(-4.0));      // unary minus binds weaker
}

TEST_CASE("functions and constants") {
    CHECK(ev("log(t)", std::exp(2.0)) == doctest::Approx(2.0));
    CHECK(ev("exp(1)", 0.0) == doctest::Approx(std::exp(1.0)));
    CHECK(ev("pow(t, 3)", 2.0) == doctest::Approx(8.0));
    CHECK(ev("e", 0.0) == doctest::Approx(std::exp(1.0)));
    CHECK(ev("pi", 0.0) == doctest::Approx(3.14159265358979323846));
    CHECK(ev("t - log(t)", 2.0) == doctest::Approx(2.0 - std::log(2.0)));
    CHECK(ev("log(t) + 1/t", 2.0) == doctest::Approx(std::log(2.0) + 0.5));
}

TEST_CASE("parse errors carry position and token") {
    try {
        parse_expression("1 + * 2");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.position == 4);
        CHECK(e.token == "*");
    }
    try {
        parse_expression("log 2");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.token == "2");
    }
    try {
        parse_expression("foo(t)");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.token == "foo");
        CHECK(e.position == 0);
    }
    CHECK_THROWS_AS(parse_expression("1 + 2)"), ParseError);
    CHECK_THROWS_AS(parse_expression("(1 + 2"), ParseError);
    CHECK_THROWS_AS(parse_expression("pow(1)"), ParseError);
    CHECK_THROWS_AS(parse_expression("1 @ 2"), ParseError);
}

TEST_CASE("energy file parsing") {
    const char* text = R"(# the w0 split, spelled out by hand
name  my-w0
hhat  t - log(t)
f     log(t) + 1/t
smoothness c2
)";
    const EnergyFileContents contents = parse_energy_file_text(text);
    CHECK(contents.name == "my-w0");
    CHECK(contents.smoothness == Smoothness::c2);
    const VolIsoSplitEnergy e = split_energy_from_file(contents);
    CHECK(e.isochoric.value(2.0) == doctest::Approx(2.0 - std::log(2.0)));
    CHECK(e.volumetric.value(0.5) == doctest::Approx(std::log(0.5) + 2.0));
    CHECK(e.isochoric.domain_min == 1.0);
    CHECK(e.volumetric.domain_min == 0.0);

    CHECK_THROWS_AS(parse_energy_file_text("name x\nf t\n"), ParseError);   // missing hhat
    CHECK_THROWS_AS(parse_energy_file_text("name x\nhhat t\n"), ParseError);  // missing f
    CHECK_THROWS_AS(parse_energy_file_text("hhat t\nf t\n"), ParseError);   // missing name
    CHECK_THROWS_AS(parse_energy_file_text("name x\nhhat t +\nf t\n"), ParseError);
    CHECK_THROWS_AS(parse_energy_file_text("name x\nhhat t\nf t\nsmoothness c9\n"), ParseError);
    CHECK_THROWS_AS(parse_energy_file_text("name x\nhhat t\nf t\nbogus 1\n"), ParseError);
}

TEST_CASE("file-based energy evaluates like the builtin") {
    const EnergyFileContents contents = parse_energy_file_text(
        "name w0-file\nhhat t - log(t)\nf log(t) + 1/t\n");
    const VolIsoSplitEnergy e = split_energy_from_file(contents);
    const OrderedSVEnergy g = split_to_ordered(e);
    CHECK(g.value(std::exp(1.0), 1.0) == doctest::Approx(std::exp(1.0) + std::exp(-1.0)));
    CHECK(g.value(1.0, 1.0) == doctest::Approx(2.0));
}
