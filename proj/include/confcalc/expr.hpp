#pragma once

// Expression trees over named real variables, with a recursive-descent
// parser, a printer whose output re-parses to the same tree, and symbolic
// differentiation.
//
// Grammar (whitespace is ignored between tokens):
//
//   expr  := term (('+' | '-') term)*
//   term  := unary (('*' | '/') unary)*
//   unary := '-' unary | power
//   power := atom ('^' unary)?            right-associative, binds tighter than '-'
//   atom  := number | variable | ident '(' expr ')' | '(' expr ')'
//
// Functions: sin cos exp log sqrt abs sgn. The default variable set is {t}.

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace confcalc {

enum class ExprOp {
  constant,
  variable,
  neg,
  sin,
  cos,
  exp,
  log,
  sqrt,
  abs,
  sgn,
  add,
  sub,
  mul,
  div,
  pow,
};

/// Number of operands the node kind takes (0, 1 or 2).
int arity(ExprOp op);

struct ExprNode {
  ExprOp op = ExprOp::constant;
  double value = 0.0;   // constant
  std::size_t var = 0;  // variable index
  std::shared_ptr<const ExprNode> lhs;
  std::shared_ptr<const ExprNode> rhs;
};

using ExprPtr = std::shared_ptr<const ExprNode>;

/// Immutable expression with an ordered list of variable names.
class ExprFn {
 public:
  ExprFn(ExprPtr root, std::vector<std::string> vars);

  const ExprPtr& root() const { return root_; }
  const std::vector<std::string>& variables() const { return vars_; }

  /// Evaluate with one value per variable. DomainError for log/sqrt of
  /// negatives, division by zero, 0^negative, negative^non-integer and any
  /// non-finite result.
  double eval(std::span<const double> vars) const;
  double eval(double t) const { return eval(std::span<const double>(&t, 1)); }

  /// Symbolic partial derivative with respect to variable `var`.
  ExprFn derivative(std::size_t var = 0) const;

  /// True when the expression does not depend on any variable.
  bool is_constant() const;

  /// Fully parenthesized text that parses back to an equivalent tree.
  std::string to_string() const;

 private:
  ExprPtr root_;
  std::vector<std::string> vars_;
};

ExprFn parse_expr(std::string_view text);
ExprFn parse_expr(std::string_view text, std::vector<std::string> vars);

/// Real power with the library's domain rules: x^p = exp(p log x) for x > 0,
/// 0 for x = 0 and p > 0, 1 for p = 0, x^p for x < 0 and integral p.
double real_pow(double x, double p);

}  // namespace confcalc
