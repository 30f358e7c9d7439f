#include "hopf/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <set>
#include <sstream>

namespace hopf {

namespace {

ExprPtr make_node(node_kind k) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    return e;
}

// Integer power by repeated squaring; deterministic and exact for the
// exponent range the grammar allows.
double ipow(double base, int k, const ExprPtr& origin) {
    bool neg = k < 0;
    unsigned long e = neg ? static_cast<unsigned long>(-(long)k) : static_cast<unsigned long>(k);
    double r = 1.0, b = base;
    while (e) {
        if (e & 1u) r *= b;
        b *= b;
        e >>= 1u;
    }
    if (neg) {
        if (r == 0.0) throw eval_error("division by zero", to_string(origin));
        return 1.0 / r;
    }
    return r;
}

const char* func_name(func_kind f) {
    switch (f) {
        case func_kind::sin: return "sin";
        case func_kind::cos: return "cos";
        case func_kind::exp: return "exp";
        case func_kind::log: return "log";
        case func_kind::sqrt: return "sqrt";
    }
    return "?";
}

} // namespace

ExprPtr Expr::constant(double v) {
    auto e = make_node(node_kind::constant);
    // normalize -0.0 so structurally equal trees stay bit-equal
    const_cast<Expr*>(e.get())->value = (v == 0.0) ? 0.0 : v;
    return e;
}

ExprPtr Expr::variable(int index) {
    auto e = make_node(node_kind::variable);
    const_cast<Expr*>(e.get())->index = index;
    return e;
}

ExprPtr Expr::parameter(int index) {
    auto e = make_node(node_kind::parameter);
    const_cast<Expr*>(e.get())->index = index;
    return e;
}

ExprPtr Expr::negate(ExprPtr x) {
    if (x->kind == node_kind::constant) return constant(-x->value);
    if (x->kind == node_kind::negate) return x->a; // nested negation collapse
    auto e = make_node(node_kind::negate);
    const_cast<Expr*>(e.get())->a = std::move(x);
    return e;
}

ExprPtr Expr::add(ExprPtr lhs, ExprPtr rhs) {
    if (lhs->kind == node_kind::constant && rhs->kind == node_kind::constant)
        return constant(lhs->value + rhs->value);
    if (lhs->is_constant(0.0)) return rhs;
    if (rhs->is_constant(0.0)) return lhs;
    auto e = make_node(node_kind::add);
    const_cast<Expr*>(e.get())->a = std::move(lhs);
    const_cast<Expr*>(e.get())->b = std::move(rhs);
    return e;
}

ExprPtr Expr::sub(ExprPtr lhs, ExprPtr rhs) {
    if (lhs->kind == node_kind::constant && rhs->kind == node_kind::constant)
        return constant(lhs->value - rhs->value);
    if (rhs->is_constant(0.0)) return lhs;
    if (lhs->is_constant(0.0)) return negate(rhs);
    auto e = make_node(node_kind::subtract);
    const_cast<Expr*>(e.get())->a = std::move(lhs);
    const_cast<Expr*>(e.get())->b = std::move(rhs);
    return e;
}

ExprPtr Expr::mul(ExprPtr lhs, ExprPtr rhs) {
    if (lhs->kind == node_kind::constant && rhs->kind == node_kind::constant)
        return constant(lhs->value * rhs->value);
    if (lhs->is_constant(0.0) || rhs->is_constant(0.0)) return constant(0.0);
    if (lhs->is_constant(1.0)) return rhs;
    if (rhs->is_constant(1.0)) return lhs;
    auto e = make_node(node_kind::multiply);
    const_cast<Expr*>(e.get())->a = std::move(lhs);
    const_cast<Expr*>(e.get())->b = std::move(rhs);
    return e;
}

ExprPtr Expr::div(ExprPtr lhs, ExprPtr rhs) {
    if (lhs->kind == node_kind::constant && rhs->kind == node_kind::constant && rhs->value != 0.0)
        return constant(lhs->value / rhs->value);
    if (rhs->is_constant(1.0)) return lhs;
    auto e = make_node(node_kind::divide);
    const_cast<Expr*>(e.get())->a = std::move(lhs);
    const_cast<Expr*>(e.get())->b = std::move(rhs);
    return e;
}

ExprPtr Expr::pow(ExprPtr base, int exponent) {
    if (exponent == 1) return base;
    if (exponent == 0) return constant(1.0);
    if (base->kind == node_kind::constant && !(base->value == 0.0 && exponent < 0)) {
        double r = 1.0, b = base->value;
        unsigned long e = exponent < 0 ? static_cast<unsigned long>(-(long)exponent)
                                       : static_cast<unsigned long>(exponent);
        while (e) {
            if (e & 1u) r *= b;
            b *= b;
            e >>= 1u;
        }
        return constant(exponent < 0 ? 1.0 / r : r);
    }
    auto e = make_node(node_kind::power);
    const_cast<Expr*>(e.get())->a = std::move(base);
    const_cast<Expr*>(e.get())->exponent = exponent;
    return e;
}

ExprPtr Expr::call(func_kind f, ExprPtr arg) {
    if (arg->kind == node_kind::constant) {
        double v = arg->value;
        switch (f) {
            case func_kind::sin: return constant(std::sin(v));
            case func_kind::cos: return constant(std::cos(v));
            case func_kind::exp: return constant(std::exp(v));
            case func_kind::log:
                if (v > 0.0) return constant(std::log(v));
                break; // out of domain: keep the node, evaluation reports it
            case func_kind::sqrt:
                if (v >= 0.0) return constant(std::sqrt(v));
                break;
        }
    }
    auto e = make_node(node_kind::call);
    const_cast<Expr*>(e.get())->func = f;
    const_cast<Expr*>(e.get())->a = std::move(arg);
    return e;
}

bool expr_equal(const ExprPtr& x, const ExprPtr& y) {
    if (x.get() == y.get()) return true;
    if (x->kind != y->kind) return false;
    switch (x->kind) {
        case node_kind::constant: return x->value == y->value;
        case node_kind::variable:
        case node_kind::parameter: return x->index == y->index;
        case node_kind::negate: return expr_equal(x->a, y->a);
        case node_kind::power: return x->exponent == y->exponent && expr_equal(x->a, y->a);
        case node_kind::call: return x->func == y->func && expr_equal(x->a, y->a);
        default: return expr_equal(x->a, y->a) && expr_equal(x->b, y->b);
    }
}

namespace {

int precedence(node_kind k) {
    switch (k) {
        case node_kind::add:
        case node_kind::subtract: return 1;
        case node_kind::multiply:
        case node_kind::divide: return 2;
        case node_kind::negate: return 3;
        case node_kind::power: return 4;
        default: return 5;
    }
}

void print(std::ostringstream& out, const ExprPtr& e, int parent_prec) {
    int prec = precedence(e->kind);
    bool parens = prec < parent_prec;
    if (parens) out << '(';
    switch (e->kind) {
        case node_kind::constant: {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", e->value);
            out << buf;
            break;
        }
        case node_kind::variable: out << "x" << e->index; break;
        case node_kind::parameter: out << "p" << e->index; break;
        case node_kind::negate:
            out << '-';
            print(out, e->a, prec + 1);
            break;
        case node_kind::add:
            print(out, e->a, prec);
            out << " + ";
            print(out, e->b, prec + 1);
            break;
        case node_kind::subtract:
            print(out, e->a, prec);
            out << " - ";
            print(out, e->b, prec + 1);
            break;
        case node_kind::multiply:
            print(out, e->a, prec);
            out << "*";
            print(out, e->b, prec + 1);
            break;
        case node_kind::divide:
            print(out, e->a, prec);
            out << "/";
            print(out, e->b, prec + 1);
            break;
        case node_kind::power:
            print(out, e->a, prec + 1);
            out << "^" << e->exponent;
            break;
        case node_kind::call:
            out << func_name(e->func) << '(';
            print(out, e->a, 0);
            out << ')';
            break;
    }
    if (parens) out << ')';
}

} // namespace

std::string to_string(const ExprPtr& e) {
    std::ostringstream out;
    print(out, e, 0);
    return out.str();
}

double evaluate(const ExprPtr& e, std::span<const double> vars, std::span<const double> pars) {
    switch (e->kind) {
        case node_kind::constant: return e->value;
        case node_kind::variable: return vars[static_cast<size_t>(e->index)];
        case node_kind::parameter: return pars[static_cast<size_t>(e->index)];
        case node_kind::negate: return -evaluate(e->a, vars, pars);
        case node_kind::add: {
            double l = evaluate(e->a, vars, pars);
            return l + evaluate(e->b, vars, pars);
        }
        case node_kind::subtract: {
            double l = evaluate(e->a, vars, pars);
            return l - evaluate(e->b, vars, pars);
        }
        case node_kind::multiply: {
            double l = evaluate(e->a, vars, pars);
            return l * evaluate(e->b, vars, pars);
        }
        case node_kind::divide: {
            double l = evaluate(e->a, vars, pars);
            double r = evaluate(e->b, vars, pars);
            if (r == 0.0) throw eval_error("division by zero", to_string(e));
            return l / r;
        }
        case node_kind::power:
            return ipow(evaluate(e->a, vars, pars), e->exponent, e);
        case node_kind::call: {
            double v = evaluate(e->a, vars, pars);
            switch (e->func) {
                case func_kind::sin: return std::sin(v);
                case func_kind::cos: return std::cos(v);
                case func_kind::exp: return std::exp(v);
                case func_kind::log:
                    if (v <= 0.0) throw eval_error("log of non-positive value", to_string(e));
                    return std::log(v);
                case func_kind::sqrt:
                    if (v < 0.0) throw eval_error("sqrt of negative value", to_string(e));
                    return std::sqrt(v);
            }
            return 0.0;
        }
    }
    return 0.0;
}

ExprPtr differentiate(const ExprPtr& e, int var) {
    switch (e->kind) {
        case node_kind::constant:
        case node_kind::parameter:
            return Expr::constant(0.0);
        case node_kind::variable:
            return Expr::constant(e->index == var ? 1.0 : 0.0);
        case node_kind::negate:
            return Expr::negate(differentiate(e->a, var));
        case node_kind::add:
            return Expr::add(differentiate(e->a, var), differentiate(e->b, var));
        case node_kind::subtract:
            return Expr::sub(differentiate(e->a, var), differentiate(e->b, var));
        case node_kind::multiply:
            return Expr::add(Expr::mul(differentiate(e->a, var), e->b),
                             Expr::mul(e->a, differentiate(e->b, var)));
        case node_kind::divide:
            // du/v - u dv / v^2
            return Expr::sub(Expr::div(differentiate(e->a, var), e->b),
                             Expr::div(Expr::mul(e->a, differentiate(e->b, var)),
                                       Expr::pow(e->b, 2)));
        case node_kind::power:
            // k u^(k-1) u'
            return Expr::mul(Expr::mul(Expr::constant(e->exponent), Expr::pow(e->a, e->exponent - 1)),
                             differentiate(e->a, var));
        case node_kind::call: {
            ExprPtr du = differentiate(e->a, var);
            switch (e->func) {
                case func_kind::sin:
                    return Expr::mul(Expr::call(func_kind::cos, e->a), du);
                case func_kind::cos:
                    return Expr::negate(Expr::mul(Expr::call(func_kind::sin, e->a), du));
                case func_kind::exp:
                    return Expr::mul(Expr::call(func_kind::exp, e->a), du);
                case func_kind::log:
                    return Expr::div(du, e->a);
                case func_kind::sqrt:
                    return Expr::div(du, Expr::mul(Expr::constant(2.0),
                                                   Expr::call(func_kind::sqrt, e->a)));
            }
            return Expr::constant(0.0);
        }
    }
    return Expr::constant(0.0);
}

// ---------------------------------------------------------------------------
// parser

namespace {

struct Token {
    enum Type { number, ident, plus, minus, star, slash, caret, lparen, rparen, comma, end } type;
    double num = 0.0;
    std::string text;
    int line = 1, col = 1;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_space();
            Token t;
            t.line = line_;
            t.col = col_;
            if (pos_ >= src_.size()) {
                t.type = Token::end;
                out.push_back(t);
                return out;
            }
            char c = src_[pos_];
            if (std::isdigit(static_cast<unsigned char>(c))) {
                t.type = Token::number;
                t.num = lex_number(t);
            } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                t.type = Token::ident;
                size_t start = pos_;
                while (pos_ < src_.size() &&
                       (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                    advance();
                t.text = std::string(src_.substr(start, pos_ - start));
            } else {
                switch (c) {
                    case '+': t.type = Token::plus; break;
                    case '-': t.type = Token::minus; break;
                    case '*': t.type = Token::star; break;
                    case '/': t.type = Token::slash; break;
                    case '^': t.type = Token::caret; break;
                    case '(': t.type = Token::lparen; break;
                    case ')': t.type = Token::rparen; break;
                    case ',': t.type = Token::comma; break;
                    default:
                        throw parse_error(line_, col_, std::string("unexpected character '") + c + "'");
                }
                advance();
            }
            out.push_back(std::move(t));
        }
    }

private:
    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_space() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) advance();
    }

    double lex_number(Token& t) {
        size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
        if (pos_ < src_.size() && src_[pos_] == '.') {
            advance();
            if (pos_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_])))
                throw parse_error(line_, col_, "expected digits after decimal point");
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            size_t mark = pos_;
            int mline = line_, mcol = col_;
            advance();
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) advance();
            if (pos_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                // not an exponent after all; "2e" would otherwise lex as ident tail
                (void)mark;
                throw parse_error(mline, mcol, "expected digits in exponent");
            }
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
        }
        t.text = std::string(src_.substr(start, pos_ - start));
        return std::strtod(t.text.c_str(), nullptr);
    }

    std::string_view src_;
    size_t pos_ = 0;
    int line_ = 1, col_ = 1;
};

class Parser {
public:
    Parser(std::vector<Token> toks, std::span<const std::string> vars,
           std::span<const std::string> pars)
        : toks_(std::move(toks)), vars_(vars), pars_(pars) {}

    ExprPtr run() {
        ExprPtr e = parse_expr();
        const Token& t = peek();
        if (t.type != Token::end)
            throw parse_error(t.line, t.col, "unexpected trailing input");
        return e;
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    const Token& take() { return toks_[pos_++]; }

    bool accept(Token::Type ty) {
        if (peek().type == ty) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(Token::Type ty, const char* what) {
        const Token& t = peek();
        if (t.type != ty) throw parse_error(t.line, t.col, std::string("expected ") + what);
        ++pos_;
    }

    ExprPtr parse_expr() {
        ExprPtr e = parse_term();
        for (;;) {
            if (accept(Token::plus))
                e = Expr::add(e, parse_term());
            else if (accept(Token::minus))
                e = Expr::sub(e, parse_term());
            else
                return e;
        }
    }

    ExprPtr parse_term() {
        ExprPtr e = parse_factor();
        for (;;) {
            if (accept(Token::star))
                e = Expr::mul(e, parse_factor());
            else if (accept(Token::slash))
                e = Expr::div(e, parse_factor());
            else
                return e;
        }
    }

    ExprPtr parse_factor() {
        if (accept(Token::minus)) return Expr::negate(parse_factor());
        ExprPtr base = parse_base();
        if (accept(Token::caret)) return Expr::pow(base, parse_signed_integer());
        return base;
    }

    int parse_signed_integer() {
        int sign = 1;
        if (accept(Token::minus))
            sign = -1;
        else
            accept(Token::plus);
        const Token& t = peek();
        if (t.type != Token::number)
            throw parse_error(t.line, t.col, "expected integer exponent");
        if (t.text.find('.') != std::string::npos || t.text.find('e') != std::string::npos ||
            t.text.find('E') != std::string::npos)
            throw parse_error(t.line, t.col, "power exponents must be integers");
        ++pos_;
        return sign * static_cast<int>(t.num);
    }

    ExprPtr parse_base() {
        const Token& t = peek();
        switch (t.type) {
            case Token::number:
                ++pos_;
                return Expr::constant(t.num);
            case Token::ident: {
                ++pos_;
                if (peek().type == Token::lparen) {
                    func_kind f;
                    if (t.text == "sin") f = func_kind::sin;
                    else if (t.text == "cos") f = func_kind::cos;
                    else if (t.text == "exp") f = func_kind::exp;
                    else if (t.text == "log") f = func_kind::log;
                    else if (t.text == "sqrt") f = func_kind::sqrt;
                    else
                        throw parse_error(t.line, t.col, "unknown function '" + t.text + "'");
                    ++pos_; // '('
                    ExprPtr arg = parse_expr();
                    if (peek().type == Token::comma)
                        throw parse_error(peek().line, peek().col,
                                          "functions take a single argument");
                    expect(Token::rparen, "')'");
                    return Expr::call(f, arg);
                }
                for (size_t i = 0; i < vars_.size(); ++i)
                    if (vars_[i] == t.text) return Expr::variable(static_cast<int>(i));
                for (size_t i = 0; i < pars_.size(); ++i)
                    if (pars_[i] == t.text) return Expr::parameter(static_cast<int>(i));
                throw parse_error(t.line, t.col, "unknown identifier '" + t.text + "'");
            }
            case Token::lparen: {
                ++pos_;
                ExprPtr e = parse_expr();
                expect(Token::rparen, "')'");
                return e;
            }
            default:
                throw parse_error(t.line, t.col, "expected expression");
        }
    }

    std::vector<Token> toks_;
    size_t pos_ = 0;
    std::span<const std::string> vars_;
    std::span<const std::string> pars_;
};

} // namespace

ExprPtr parse_expression(std::string_view source, std::span<const std::string> variables,
                         std::span<const std::string> parameters) {
    if (source.empty()) throw parse_error(1, 1, "empty expression");
    Lexer lex(source);
    Parser parser(lex.run(), variables, parameters);
    return parser.run();
}

// ---------------------------------------------------------------------------
// VectorFieldSpec

VectorFieldSpec::VectorFieldSpec(std::vector<std::string> variables,
                                 std::vector<std::string> parameters,
                                 const std::vector<std::string>& equation_sources)
    : variables_(std::move(variables)), parameters_(std::move(parameters)) {
    validate_names();
    if (equation_sources.size() != variables_.size())
        throw schema_error("'equations' has " + std::to_string(equation_sources.size()) +
                           " entries but 'variables' declares " + std::to_string(variables_.size()));
    sources_ = equation_sources;
    equations_.reserve(sources_.size());
    for (const std::string& s : sources_)
        equations_.push_back(parse_expression(s, variables_, parameters_));
    jac_.resize(equations_.size());
    for (size_t i = 0; i < equations_.size(); ++i)
        for (int j = 0; j < dimension(); ++j) jac_[i].push_back(differentiate(equations_[i], j));
}

VectorFieldSpec::VectorFieldSpec(std::vector<std::string> variables,
                                 std::vector<std::string> parameters,
                                 std::vector<ExprPtr> equations)
    : variables_(std::move(variables)), parameters_(std::move(parameters)),
      equations_(std::move(equations)) {
    validate_names();
    if (equations_.size() != variables_.size())
        throw schema_error("'equations' has " + std::to_string(equations_.size()) +
                           " entries but 'variables' declares " + std::to_string(variables_.size()));
    sources_.reserve(equations_.size());
    for (const ExprPtr& e : equations_) sources_.push_back(hopf::to_string(e));
    jac_.resize(equations_.size());
    for (size_t i = 0; i < equations_.size(); ++i)
        for (int j = 0; j < dimension(); ++j) jac_[i].push_back(differentiate(equations_[i], j));
}

void VectorFieldSpec::validate_names() const {
    if (variables_.size() < 2) throw schema_error("at least 2 variables required");
    static const std::set<std::string> reserved = {"sin", "cos", "exp", "log", "sqrt"};
    std::set<std::string> seen;
    for (const auto& lists : {&variables_, &parameters_}) {
        for (const std::string& name : *lists) {
            if (name.empty()) throw schema_error("empty identifier name");
            if (reserved.count(name))
                throw schema_error("identifier '" + name + "' collides with a builtin function");
            if (!seen.insert(name).second)
                throw schema_error("duplicate identifier '" + name + "'");
        }
    }
}

int VectorFieldSpec::parameter_index(const std::string& name) const {
    for (size_t i = 0; i < parameters_.size(); ++i)
        if (parameters_[i] == name) return static_cast<int>(i);
    return -1;
}

RVec VectorFieldSpec::evaluate_field(const RVec& x, const RVec& mu) const {
    RVec f(equations_.size());
    for (size_t i = 0; i < equations_.size(); ++i) f[i] = evaluate(equations_[i], x, mu);
    return f;
}

RMat VectorFieldSpec::jacobian_at(const RVec& x, const RVec& mu) const {
    int n = dimension();
    RMat J(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) J(i, j) = evaluate(jac_[i][j], x, mu);
    return J;
}

} // namespace hopf
