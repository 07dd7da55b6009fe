#pragma once

// Scalar field expressions over chart coordinates.
//
// Grammar (EBNF, whitespace ignored between tokens):
//
//   expr     = term , { ( "+" | "-" ) , term } ;
//   term     = unary , { ( "*" | "/" ) , unary } ;
//   unary    = "-" , unary | power ;
//   power    = primary , [ "^" , [ "-" ] , integer ] ;
//   primary  = number | variable | function , "(" , expr , ")" | "(" , expr , ")" ;
//   variable = ( "x" | "u" ) , integer ;          (1-based)
//   function = "exp" | "log" | "sin" | "cos" | "sqrt" | "tanh" ;
//   number   = digits , [ "." , digits ] , [ ( "e" | "E" ) , [ "+" | "-" ] , digits ] ;
//
// Binary operators are left associative. Exponents are integer literals only.
// On a bundle chart with base dimension n, u_i is variable n + i - 1.

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "subgeo/jet.hpp"
#include "subgeo/linalg.hpp"

namespace subgeo {

enum class ExprKind { Number, Variable, Negate, Add, Subtract, Multiply, Divide, Power, Call };
enum class Function { Exp, Log, Sin, Cos, Sqrt, Tanh };

struct ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

struct ExprNode {
    ExprKind kind;
    double number = 0.0;  // Number
    int index = 0;        // Variable: 0-based; Power: exponent
    Function function = Function::Exp;
    std::vector<Expr> children;
};

/// Number of coordinates an expression may reference.
struct ChartVariables {
    int dim = 0;           // x1..x_dim
    int velocity_dim = 0;  // u1..u_velocity_dim, after the x's
    int total() const { return dim + velocity_dim; }
};

Expr parse(std::string_view text, ChartVariables vars);
inline Expr parse(std::string_view text, int dim) { return parse(text, ChartVariables{dim, 0}); }

/// Fully parenthesized text that parses back to the same tree.
std::string print(const Expr& e, ChartVariables vars);

bool structurally_equal(const Expr& a, const Expr& b);

/// Evaluates over jets of the coordinates (jets may be constants).
JetD eval(const Expr& e, std::span<const JetD> coords);
JetD eval_jet(const Expr& e, const Point& point, int order);
double eval_value(const Expr& e, const Point& point);

}  // namespace subgeo
