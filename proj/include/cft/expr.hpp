#pragma once

#include <map>
#include <memory>
#include <string>

#include "cft/jet.hpp"

namespace cft {

using ParamMap = std::map<std::string, double>;

// Built-in unary functions of the expression language.
enum class Func { Sin, Cos, Tan, Sinh, Cosh, Tanh, Asinh, Exp, Ln, Sqrt, Abs };

enum class BinOp { Add, Sub, Mul, Div, Pow };

const char* func_name(Func f);

// Immutable expression tree.  Numeric literals, named parameters, the
// variables u and v, the constants pi and e, arithmetic, unary negation and
// unary function calls.
struct Expr {
    enum class Kind { Number, Param, VarU, VarV, Pi, E, Neg, Binary, Call };

    Kind kind;
    double number = 0;              // Kind::Number
    std::string param;              // Kind::Param
    BinOp op = BinOp::Add;          // Kind::Binary
    Func func = Func::Sin;          // Kind::Call
    std::shared_ptr<const Expr> a, b;
};

using ExprPtr = std::shared_ptr<const Expr>;

// Parse UTF-8 text with standard precedence (^ right-associative, binding
// tighter than unary minus, then * /, then + -).  Throws ParseError with the
// byte offset of the first problem.
ExprPtr parse(const std::string& text);

// Canonical text form; parse(print(e)) is structurally identical to e.
std::string print(const Expr& e);

bool structurally_equal(const Expr& a, const Expr& b);

// True if the variable (0 = u, 1 = v) occurs anywhere in the tree.
bool contains_var(const Expr& e, int which);

// Evaluate over doubles or truncated jets.  All parameters must be bound;
// domain violations throw DomainError.
double eval_scalar(const Expr& e, double u, double v, const ParamMap& params);
Jet3 eval_jet(const Expr& e, const Jet3& u, const ParamMap& params);
BiJet3 eval_bijet(const Expr& e, const BiJet3& u, const BiJet3& v, const ParamMap& params);

} // namespace cft
