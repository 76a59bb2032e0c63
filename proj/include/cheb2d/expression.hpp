#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

#include "cheb2d/cheb_core.hpp"

namespace cheb2d {

// Grammar (EBNF), lowest precedence first:
//
//   expression = term , { ( "+" | "-" ) , term } ;
//   term       = unary , { ( "*" | "/" ) , unary } ;
//   unary      = "-" , unary | power ;
//   power      = primary , [ "^" , [ "-" ] , integer ] ;
//   primary    = number | "x" | "y" | "pi"
//              | ( "abs" | "sin" | "cos" | "exp" ) , "(" , expression , ")"
//              | "(" , expression , ")" ;
//
// so -x^2 is -(x^2) and a-b-c is (a-b)-c. Exponents are integer literals.

enum class ExprKind { constant, var_x, var_y, neg, abs, sin, cos, exp, add, sub, mul, div, pow };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Immutable expression tree node. `value` is used by constants, `exponent`
/// by pow; unary nodes use `lhs` only.
struct Expr {
  ExprKind kind = ExprKind::constant;
  double value = 0.0;
  int exponent = 0;
  ExprPtr lhs;
  ExprPtr rhs;

  static ExprPtr constant(double v);
  static ExprPtr variable(ExprKind var);
  static ExprPtr unary(ExprKind op, ExprPtr operand);
  static ExprPtr binary(ExprKind op, ExprPtr lhs, ExprPtr rhs);
  static ExprPtr power(ExprPtr base, int exponent);
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, int line, int column);

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::string message_;
  int line_;
  int column_;
};

/// Throws ParseError with a 1-based line/column on malformed input.
ExprPtr parse_expression(std::string_view text);

/// Throws EvaluationError on division by zero (including a zero base with a
/// negative exponent).
double evaluate(const Expr& e, double x, double y);

/// Fully parenthesised text that parses back to the same tree.
std::string to_string(const Expr& e);

bool structurally_equal(const Expr& a, const Expr& b);

TargetFunction ast_to_function(ExprPtr ast);

}  // namespace cheb2d
