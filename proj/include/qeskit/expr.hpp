#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qeskit {

/// Parameter bindings used when evaluating an expression.
using Params = std::map<std::string, double, std::less<>>;

struct ParseError : std::runtime_error {
  std::size_t position;
  ParseError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg + " (at offset " + std::to_string(pos) + ")"), position(pos) {}
};

struct EvalError : std::runtime_error {
  std::string subexpression;
  EvalError(const std::string& msg, std::string subexpr)
      : std::runtime_error(msg + " in '" + subexpr + "'"), subexpression(std::move(subexpr)) {}
};

namespace detail {
struct Node;
using NodePtr = std::shared_ptr<const Node>;
}  // namespace detail

/// Immutable symbolic expression in one variable `x` plus named parameters.
///
/// Grammar (see README for the EBNF): +, -, *, /, unary minus, integer-only
/// powers `u^n`, and the intrinsics exp, log, sqrt, sin, cos, sinh, cosh,
/// tanh. Construction applies constant folding and the power normalizations
/// u^0 -> 1, u^1 -> u; nothing else is simplified, so printing preserves the
/// parsed structure.
class Expr {
 public:
  Expr();  // the constant 0

  static Expr parse(std::string_view text, const std::vector<std::string>& parameters = {});
  static Expr constant(double value);
  static Expr variable();

  /// Exact derivative of the given order (1 through 6).
  Expr derivative(int order = 1) const;

  /// Evaluate at x. Division by zero, log/sqrt domain violations, zero to a
  /// negative power and unbound parameters raise EvalError naming the
  /// offending subexpression.
  double evaluate(double x, const Params& params = {}) const;

  /// Same as evaluate() but carried out in extended precision end to end.
  long double evaluate_ld(long double x, const Params& params = {}) const;

  std::string str() const;
  std::size_t node_count() const;

 private:
  explicit Expr(detail::NodePtr root);
  detail::NodePtr root_;
};

}  // namespace qeskit
