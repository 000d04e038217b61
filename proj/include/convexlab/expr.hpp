#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

#include "convexlab/energy.hpp"

namespace convexlab {

/// Reported with the byte offset into the expression and the offending token.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t position, std::string token)
        : std::runtime_error(msg + " at position " + std::to_string(position) +
                             " near '" + token + "'"),
          position(position), token(std::move(token)) {}

    struct AlreadyFormatted {};
    ParseError(AlreadyFormatted, const std::string& msg, std::size_t position, std::string token)
        : std::runtime_error(msg), position(position), token(std::move(token)) {}

    std::size_t position;
    std::string token;
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind { constant, variable, add, sub, mul, div, neg, log, exp, pow };
    Kind kind = Kind::constant;
    double constant = 0.0;
    ExprPtr lhs;
    ExprPtr rhs;
};

/// Arithmetic over {+, -, *, /, log, exp, pow, constants} in one variable t.
/// pow(a, b) and a^b are equivalent; named constants: e, pi.
ExprPtr parse_expression(std::string_view text);

double eval_expr(const Expr& e, double t);

/// Wrap a parsed expression as a 1-d energy component. Derivatives are left
/// numeric; the declared smoothness gates derivative-based criteria.
ScalarFn scalar_fn_from_expr(ExprPtr expr, double domain_min, Smoothness smoothness);

/// Energy definition file: line-oriented "key value" pairs with '#' comments.
/// Keys: name (identifier), hhat (expression in t, domain [1, inf)),
/// f (expression in t, domain (0, inf)), smoothness (c0|c1|c2, default c2).
struct EnergyFileContents {
    std::string name;
    ExprPtr hhat;
    ExprPtr f;
    Smoothness smoothness = Smoothness::c2;
};

EnergyFileContents parse_energy_file_text(std::string_view text);
EnergyFileContents load_energy_file(const std::string& path);

VolIsoSplitEnergy split_energy_from_file(const EnergyFileContents& contents);

}  // namespace convexlab
