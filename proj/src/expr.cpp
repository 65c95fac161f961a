#include "cft/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <sstream>

namespace cft {

namespace {

constexpr std::array<std::pair<const char*, Func>, 11> kFuncs{{
    {"sin", Func::Sin}, {"cos", Func::Cos}, {"tan", Func::Tan},
    {"sinh", Func::Sinh}, {"cosh", Func::Cosh}, {"tanh", Func::Tanh},
    {"asinh", Func::Asinh}, {"exp", Func::Exp}, {"ln", Func::Ln},
    {"sqrt", Func::Sqrt}, {"abs", Func::Abs},
}};

std::optional<Func> lookup_func(const std::string& name) {
    for (const auto& [n, f] : kFuncs)
        if (name == n) return f;
    return std::nullopt;
}

ExprPtr make(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

ExprPtr num(double x) {
    Expr e; e.kind = Expr::Kind::Number; e.number = x; return make(std::move(e));
}

ExprPtr binary(BinOp op, ExprPtr a, ExprPtr b) {
    Expr e; e.kind = Expr::Kind::Binary; e.op = op; e.a = std::move(a); e.b = std::move(b);
    return make(std::move(e));
}

// --- recursive-descent parser ----------------------------------------------

struct Parser {
    const std::string& s;
    std::size_t pos = 0;

    explicit Parser(const std::string& text) : s(text) {}

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }
    bool eat(char c) {
        if (peek() == c) { ++pos; return true; }
        return false;
    }

    ExprPtr parse_expr() { return parse_add(); }

    ExprPtr parse_add() {
        ExprPtr lhs = parse_mul();
        for (;;) {
            char c = peek();
            if (c == '+' || c == '-') {
                ++pos;
                lhs = binary(c == '+' ? BinOp::Add : BinOp::Sub, lhs, parse_mul());
            } else {
                return lhs;
            }
        }
    }

    ExprPtr parse_mul() {
        ExprPtr lhs = parse_unary();
        for (;;) {
            char c = peek();
            if (c == '*' || c == '/') {
                ++pos;
                lhs = binary(c == '*' ? BinOp::Mul : BinOp::Div, lhs, parse_unary());
            } else {
                return lhs;
            }
        }
    }

    ExprPtr parse_unary() {
        if (eat('-')) {
            Expr e; e.kind = Expr::Kind::Neg; e.a = parse_unary();
            return make(std::move(e));
        }
        return parse_power();
    }

    ExprPtr parse_power() {
        ExprPtr base = parse_atom();
        if (eat('^'))
            return binary(BinOp::Pow, base, parse_unary());  // right-assoc
        return base;
    }

    ExprPtr parse_atom() {
        char c = peek();
        std::size_t at = pos;
        if (c == '\0') throw ParseError("expected operand", pos);
        if (c == '(') {
            ++pos;
            ExprPtr inner = parse_expr();
            if (!eat(')')) throw ParseError("expected ')'", pos);
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string name = parse_ident();
            if (peek() == '(') {
                auto f = lookup_func(name);
                if (!f) throw ParseError("unknown function '" + name + "'", at);
                ++pos;
                ExprPtr arg = parse_expr();
                if (!eat(')')) throw ParseError("expected ')'", pos);
                Expr e; e.kind = Expr::Kind::Call; e.func = *f; e.a = std::move(arg);
                return make(std::move(e));
            }
            if (lookup_func(name))
                throw ParseError("function '" + name + "' needs an argument list", at);
            Expr e;
            if (name == "u") e.kind = Expr::Kind::VarU;
            else if (name == "v") e.kind = Expr::Kind::VarV;
            else if (name == "pi") e.kind = Expr::Kind::Pi;
            else if (name == "e") e.kind = Expr::Kind::E;
            else { e.kind = Expr::Kind::Param; e.param = std::move(name); }
            return make(std::move(e));
        }
        throw ParseError(std::string("unexpected character '") + c + "'", pos);
    }

    std::string parse_ident() {
        std::size_t start = pos;
        while (pos < s.size() &&
               (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
            ++pos;
        return s.substr(start, pos - start);
    }

    ExprPtr parse_number() {
        std::size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos < s.size() && s[pos] == '.') {
            ++pos;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        }
        if (pos < s.size() && (s[pos] == 'e' || s[pos] == 'E')) {
            std::size_t mark = pos;
            ++pos;
            if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) ++pos;
            if (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
                while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
            } else {
                pos = mark;  // 'e' was the Euler constant or an identifier
            }
        }
        double value = 0;
        auto res = std::from_chars(s.data() + start, s.data() + pos, value);
        if (res.ec != std::errc() || res.ptr != s.data() + pos)
            throw ParseError("bad numeric literal", start);
        return num(value);
    }
};

// --- printer ----------------------------------------------------------------

// Precedence levels: add 1, mul 2, unary 3, pow 4, atom 5.
int prec(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::Binary:
            switch (e.op) {
                case BinOp::Add: case BinOp::Sub: return 1;
                case BinOp::Mul: case BinOp::Div: return 2;
                case BinOp::Pow: return 4;
            }
            return 1;
        case Expr::Kind::Neg: return 3;
        default: return 5;
    }
}

void print_rec(const Expr& e, int min_prec, std::string& out);

void print_child(const ExprPtr& c, int min_prec, std::string& out) {
    if (prec(*c) < min_prec) {
        out += '(';
        print_rec(*c, 0, out);
        out += ')';
    } else {
        print_rec(*c, 0, out);
    }
}

std::string format_number(double x) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

void print_rec(const Expr& e, int, std::string& out) {
    switch (e.kind) {
        case Expr::Kind::Number: out += format_number(e.number); return;
        case Expr::Kind::Param: out += e.param; return;
        case Expr::Kind::VarU: out += 'u'; return;
        case Expr::Kind::VarV: out += 'v'; return;
        case Expr::Kind::Pi: out += "pi"; return;
        case Expr::Kind::E: out += 'e'; return;
        case Expr::Kind::Neg:
            out += '-';
            print_child(e.a, 4, out);
            return;
        case Expr::Kind::Call:
            out += func_name(e.func);
            out += '(';
            print_rec(*e.a, 0, out);
            out += ')';
            return;
        case Expr::Kind::Binary: {
            const char* sym = nullptr;
            int p = prec(e);
            int lmin = p, rmin = p + 1;
            switch (e.op) {
                case BinOp::Add: sym = " + "; rmin = p; break;
                case BinOp::Sub: sym = " - "; break;
                case BinOp::Mul: sym = "*"; rmin = p; break;
                case BinOp::Div: sym = "/"; break;
                case BinOp::Pow: sym = "^"; lmin = p + 1; rmin = 3; break;
            }
            print_child(e.a, lmin, out);
            out += sym;
            print_child(e.b, rmin, out);
            return;
        }
    }
}

// --- evaluation --------------------------------------------------------------

// Scalar counterparts of the jet functions, with the same domain checks.
struct ScalarOps {
    static double sin(double x) { return std::sin(x); }
    static double cos(double x) { return std::cos(x); }
    static double tan(double x) { return std::tan(x); }
    static double sinh(double x) { return std::sinh(x); }
    static double cosh(double x) { return std::cosh(x); }
    static double tanh(double x) { return std::tanh(x); }
    static double asinh(double x) { return std::asinh(x); }
    static double exp(double x) { return std::exp(x); }
    static double log(double x) {
        if (!(x > 0)) throw DomainError("ln of non-positive value");
        return std::log(x);
    }
    static double sqrt(double x) {
        if (!(x > 0)) throw DomainError("sqrt of non-positive value");
        return std::sqrt(x);
    }
    static double abs(double x) { return std::abs(x); }
    static double inv(double x) {
        if (x == 0) throw DomainError("division by zero");
        return 1.0 / x;
    }
    static double constant(double c) { return c; }
    static bool is_const(double) { return true; }
    static double value(double x) { return x; }
};

template <class J>
struct JetOps {
    static J sin(const J& x) { return cft::sin(x); }
    static J cos(const J& x) { return cft::cos(x); }
    static J tan(const J& x) { return cft::tan(x); }
    static J sinh(const J& x) { return cft::sinh(x); }
    static J cosh(const J& x) { return cft::cosh(x); }
    static J tanh(const J& x) { return cft::tanh(x); }
    static J asinh(const J& x) { return cft::asinh(x); }
    static J exp(const J& x) { return cft::exp(x); }
    static J log(const J& x) { return cft::log(x); }
    static J sqrt(const J& x) { return cft::sqrt(x); }
    static J abs(const J& x) { return cft::abs(x); }
    static J inv(const J& x) { return cft::inv(x); }
    static J constant(double c) { return J::constant(c); }
    static bool is_const(const Jet3& x) { return x.d1 == 0 && x.d2 == 0 && x.d3 == 0; }
    static bool is_const(const BiJet3& x) {
        return x.fu == 0 && x.fv == 0 && x.fuu == 0 && x.fuv == 0 && x.fvv == 0 &&
               x.fuuu == 0 && x.fuuv == 0 && x.fuvv == 0 && x.fvvv == 0;
    }
    static double value(const Jet3& x) { return x.v; }
    static double value(const BiJet3& x) { return x.f; }
};

template <class Ops, class T>
T apply_func(Func f, const T& x) {
    switch (f) {
        case Func::Sin: return Ops::sin(x);
        case Func::Cos: return Ops::cos(x);
        case Func::Tan: return Ops::tan(x);
        case Func::Sinh: return Ops::sinh(x);
        case Func::Cosh: return Ops::cosh(x);
        case Func::Tanh: return Ops::tanh(x);
        case Func::Asinh: return Ops::asinh(x);
        case Func::Exp: return Ops::exp(x);
        case Func::Ln: return Ops::log(x);
        case Func::Sqrt: return Ops::sqrt(x);
        case Func::Abs: return Ops::abs(x);
    }
    throw Error("unreachable");
}

// Integer powers use repeated multiplication (valid for any base sign);
// everything else goes through exp(b ln a), requiring a > 0.
template <class Ops, class T>
T apply_pow(const T& base, const T& expo) {
    if (Ops::is_const(expo)) {
        double ev = Ops::value(expo);
        if (ev == std::nearbyint(ev) && std::abs(ev) <= 64) {
            long n = static_cast<long>(ev);
            bool negative = n < 0;
            n = std::labs(n);
            T acc = Ops::constant(1);
            T cur = base;
            while (n > 0) {
                if (n & 1) acc = acc * cur;
                cur = cur * cur;
                n >>= 1;
            }
            return negative ? Ops::inv(acc) : acc;
        }
    }
    if (!(Ops::value(base) > 0))
        throw DomainError("non-integer power of a non-positive base");
    return Ops::exp(expo * Ops::log(base));
}

template <class Ops, class T>
T eval_rec(const Expr& e, const T& u, const T& v, const ParamMap& params) {
    switch (e.kind) {
        case Expr::Kind::Number: return Ops::constant(e.number);
        case Expr::Kind::Pi: return Ops::constant(M_PI);
        case Expr::Kind::E: return Ops::constant(M_E);
        case Expr::Kind::VarU: return u;
        case Expr::Kind::VarV: return v;
        case Expr::Kind::Param: {
            auto it = params.find(e.param);
            if (it == params.end()) throw UnboundParameterError(e.param);
            return Ops::constant(it->second);
        }
        case Expr::Kind::Neg: return -eval_rec<Ops>(*e.a, u, v, params);
        case Expr::Kind::Call: return apply_func<Ops>(e.func, eval_rec<Ops>(*e.a, u, v, params));
        case Expr::Kind::Binary: {
            T a = eval_rec<Ops>(*e.a, u, v, params);
            T b = eval_rec<Ops>(*e.b, u, v, params);
            switch (e.op) {
                case BinOp::Add: return a + b;
                case BinOp::Sub: return a - b;
                case BinOp::Mul: return a * b;
                case BinOp::Div: return a * Ops::inv(b);
                case BinOp::Pow: return apply_pow<Ops>(a, b);
            }
        }
    }
    throw Error("unreachable");
}

} // namespace

const char* func_name(Func f) {
    for (const auto& [n, g] : kFuncs)
        if (g == f) return n;
    return "?";
}

ExprPtr parse(const std::string& text) {
    Parser p(text);
    if (p.peek() == '\0') throw ParseError("empty input", 0);
    ExprPtr e = p.parse_expr();
    if (p.peek() != '\0') throw ParseError("trailing input", p.pos);
    return e;
}

std::string print(const Expr& e) {
    std::string out;
    print_rec(e, 0, out);
    return out;
}

bool structurally_equal(const Expr& a, const Expr& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case Expr::Kind::Number: return a.number == b.number;
        case Expr::Kind::Param: return a.param == b.param;
        case Expr::Kind::Neg: return structurally_equal(*a.a, *b.a);
        case Expr::Kind::Call:
            return a.func == b.func && structurally_equal(*a.a, *b.a);
        case Expr::Kind::Binary:
            return a.op == b.op && structurally_equal(*a.a, *b.a) &&
                   structurally_equal(*a.b, *b.b);
        default: return true;
    }
}

bool contains_var(const Expr& e, int which) {
    switch (e.kind) {
        case Expr::Kind::VarU: return which == 0;
        case Expr::Kind::VarV: return which == 1;
        case Expr::Kind::Neg: return contains_var(*e.a, which);
        case Expr::Kind::Call: return contains_var(*e.a, which);
        case Expr::Kind::Binary:
            return contains_var(*e.a, which) || contains_var(*e.b, which);
        default: return false;
    }
}

double eval_scalar(const Expr& e, double u, double v, const ParamMap& params) {
    return eval_rec<ScalarOps>(e, u, v, params);
}

Jet3 eval_jet(const Expr& e, const Jet3& u, const ParamMap& params) {
    return eval_rec<JetOps<Jet3>>(e, u, Jet3::constant(0), params);
}

BiJet3 eval_bijet(const Expr& e, const BiJet3& u, const BiJet3& v, const ParamMap& params) {
    return eval_rec<JetOps<BiJet3>>(e, u, v, params);
}

} // namespace cft
