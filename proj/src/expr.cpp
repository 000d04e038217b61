#include "convexlab/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace convexlab {

namespace {

ExprPtr make_node(Expr::Kind kind, ExprPtr a = nullptr, ExprPtr b = nullptr) {
    auto e = std::make_shared<Expr>();
    e->kind = kind;
    e->lhs = std::move(a);
    e->rhs = std::move(b);
    return e;
}

ExprPtr make_const(double v) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::constant;
    e->constant = v;
    return e;
}

struct Token {
    enum class Type { number, ident, op, lparen, rparen, comma, end };
    Type type = Type::end;
    double number = 0.0;
    std::string text;
    std::size_t pos = 0;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) { advance(); }

    const Token& peek() const { return current_; }

    Token take() {
        Token t = current_;
        advance();
        return t;
    }

private:
    void advance() {
        while (i_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[i_]))) ++i_;
        current_ = Token{};
        current_.pos = i_;
        if (i_ >= src_.size()) {
            current_.type = Token::Type::end;
            current_.text = "<end>";
            return;
        }
        const char c = src_[i_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* begin = src_.data() + i_;
            char* end = nullptr;
            current_.number = std::strtod(begin, &end);
            if (end == begin) {
                throw ParseError("invalid number", i_, std::string(1, c));
            }
            current_.type = Token::Type::number;
            current_.text = std::string(begin, static_cast<std::size_t>(end - begin));
            i_ += static_cast<std::size_t>(end - begin);
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i_;
            while (j < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[j])) || src_[j] == '_')) {
                ++j;
            }
            current_.type = Token::Type::ident;
            current_.text = std::string(src_.substr(i_, j - i_));
            i_ = j;
            return;
        }
        switch (c) {
            case '+': case '-': case '*': case '/': case '^':
                current_.type = Token::Type::op;
                break;
            case '(': current_.type = Token::Type::lparen; break;
            case ')': current_.type = Token::Type::rparen; break;
            case ',': current_.type = Token::Type::comma; break;
            default:
                throw ParseError("unexpected character", i_, std::string(1, c));
        }
        current_.text = std::string(1, c);
        ++i_;
    }

    std::string_view src_;
    std::size_t i_ = 0;
    Token current_;
};

class Parser {
public:
    explicit Parser(std::string_view src) : lex_(src) {}

    ExprPtr parse() {
        ExprPtr e = expression();
        const Token& t = lex_.peek();
        if (t.type != Token::Type::end) {
            throw ParseError("trailing input", t.pos, t.text);
        }
        return e;
    }

private:
    ExprPtr expression() {
        ExprPtr e = term();
        while (lex_.peek().type == Token::Type::op &&
               (lex_.peek().text == "+" || lex_.peek().text == "-")) {
            const Token op = lex_.take();
            ExprPtr r = term();
            e = make_node(op.text == "+" ? Expr::Kind::add : Expr::Kind::sub, e, r);
        }
        return e;
    }

    ExprPtr term() {
        ExprPtr e = unary();
        while (lex_.peek().type == Token::Type::op &&
               (lex_.peek().text == "*" || lex_.peek().text == "/")) {
            const Token op = lex_.take();
            ExprPtr r = unary();
            e = make_node(op.text == "*" ? Expr::Kind::mul : Expr::Kind::div, e, r);
        }
        return e;
    }

    ExprPtr unary() {
        if (lex_.peek().type == Token::Type::op && lex_.peek().text == "-") {
            lex_.take();
            return make_node(Expr::Kind::neg, unary());
        }
        if (lex_.peek().type == Token::Type::op && lex_.peek().text == "+") {
            lex_.take();
            return unary();
        }
        return power();
    }

    ExprPtr power() {
        ExprPtr base = primary();
        if (lex_.peek().type == Token::Type::op && lex_.peek().text == "^") {
            lex_.take();
            return make_node(Expr::Kind::pow, base, unary());  // right associative
        }
        return base;
    }

    ExprPtr primary() {
        const Token t = lex_.take();
        switch (t.type) {
            case Token::Type::number:
                return make_const(t.number);
            case Token::Type::ident: {
                if (t.text == "t") return make_node(Expr::Kind::variable);
                if (t.text == "e") return make_const(std::exp(1.0));
                if (t.text == "pi") return make_const(3.14159265358979323846);
                if (t.text == "log" || t.text == "exp") {
                    expect(Token::Type::lparen, "(");
                    ExprPtr arg = expression();
                    expect(Token::Type::rparen, ")");
                    return make_node(t.text == "log" ? Expr::Kind::log : Expr::Kind::exp, arg);
                }
                if (t.text == "pow") {
                    expect(Token::Type::lparen, "(");
                    ExprPtr a = expression();
                    expect(Token::Type::comma, ",");
                    ExprPtr b = expression();
                    expect(Token::Type::rparen, ")");
                    return make_node(Expr::Kind::pow, a, b);
                }
                throw ParseError("unknown identifier", t.pos, t.text);
            }
            case Token::Type::lparen: {
                ExprPtr e = expression();
                expect(Token::Type::rparen, ")");
                return e;
            }
            default:
                throw ParseError("expected a value", t.pos, t.text);
        }
    }

    void expect(Token::Type type, const char* what) {
        const Token t = lex_.take();
        if (t.type != type) {
            throw ParseError(std::string("expected '") + what + "'", t.pos, t.text);
        }
    }

    Lexer lex_;
};

}  // namespace

ExprPtr parse_expression(std::string_view text) {
    return Parser(text).parse();
}

double eval_expr(const Expr& e, double t) {
    switch (e.kind) {
        case Expr::Kind::constant: return e.constant;
        case Expr::Kind::variable: return t;
        case Expr::Kind::add: return eval_expr(*e.lhs, t) + eval_expr(*e.rhs, t);
        case Expr::Kind::sub: return eval_expr(*e.lhs, t) - eval_expr(*e.rhs, t);
        case Expr::Kind::mul: return eval_expr(*e.lhs, t) * eval_expr(*e.rhs, t);
        case Expr::Kind::div: return eval_expr(*e.lhs, t) / eval_expr(*e.rhs, t);
        case Expr::Kind::neg: return -eval_expr(*e.lhs, t);
        case Expr::Kind::log: return std::log(eval_expr(*e.lhs, t));
        case Expr::Kind::exp: return std::exp(eval_expr(*e.lhs, t));
        case Expr::Kind::pow: return std::pow(eval_expr(*e.lhs, t), eval_expr(*e.rhs, t));
    }
    return 0.0;
}

ScalarFn scalar_fn_from_expr(ExprPtr expr, double domain_min, Smoothness smoothness) {
    ScalarFn fn;
    fn.value = [expr = std::move(expr)](double t) { return eval_expr(*expr, t); };
    fn.domain_min = domain_min;
    fn.smoothness = smoothness;
    fn.numeric_derivs = true;
    return fn;
}

EnergyFileContents parse_energy_file_text(std::string_view text) {
    EnergyFileContents out;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    bool have_h = false, have_f = false;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::size_t b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        std::size_t e = line.find_first_of(" \t", b);
        const std::string key = line.substr(b, e == std::string::npos ? std::string::npos : e - b);
        std::string rest = e == std::string::npos ? "" : line.substr(e);
        const std::size_t rb = rest.find_first_not_of(" \t\r");
        rest = rb == std::string::npos ? "" : rest.substr(rb);
        while (!rest.empty() && (rest.back() == ' ' || rest.back() == '\t' || rest.back() == '\r')) {
            rest.pop_back();
        }
        try {
            if (key == "name") {
                out.name = rest;
            } else if (key == "hhat") {
                out.hhat = parse_expression(rest);
                have_h = true;
            } else if (key == "f") {
                out.f = parse_expression(rest);
                have_f = true;
            } else if (key == "smoothness") {
                if (rest == "c0") out.smoothness = Smoothness::c0;
                else if (rest == "c1") out.smoothness = Smoothness::c1;
                else if (rest == "c2") out.smoothness = Smoothness::c2;
                else throw ParseError("unknown smoothness", 0, rest);
            } else {
                throw ParseError("unknown key", 0, key);
            }
        } catch (const ParseError& pe) {
            throw ParseError(ParseError::AlreadyFormatted{},
                             "line " + std::to_string(lineno) + ": " + pe.what(),
                             pe.position, pe.token);
        }
    }
    if (out.name.empty()) throw ParseError("missing 'name' entry", 0, "name");
    if (!have_h) throw ParseError("missing 'hhat' entry", 0, "hhat");
    if (!have_f) throw ParseError("missing 'f' entry", 0, "f");
    return out;
}

EnergyFileContents load_energy_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open energy file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_energy_file_text(buf.str());
}

VolIsoSplitEnergy split_energy_from_file(const EnergyFileContents& contents) {
    VolIsoSplitEnergy e;
    e.name = contents.name;
    e.isochoric = scalar_fn_from_expr(contents.hhat, 1.0, contents.smoothness);
    e.volumetric = scalar_fn_from_expr(contents.f, 0.0, contents.smoothness);
    return e;
}

}  // namespace convexlab
