#pragma once

// Small arithmetic expression language shared by closed-form group rules, moment
// maps and radial integrands:
//   numbers (exact decimals or p/q via '/'), named variables, + - * / ^ (or **),
//   parentheses, and the functions exp, log, sin, cos, sqrt, abs. The constant
//   `pi` is available to floating evaluation only.

#include <memory>
#include <string>
#include <vector>

#include "affinekit/matrix.hpp"

namespace affinekit {

class Expression {
 public:
  Expression();  // the constant 0
  static Expression parse(const std::string& text, const std::vector<std::string>& variables);
  static Expression constant(const Rational& q);

  const std::string& text() const { return text_; }
  std::size_t arity() const { return arity_; }
  /// True when the expression is built from +, -, *, non-negative integer powers,
  /// numbers and variables only.
  bool is_polynomial() const;

  /// Exact evaluation; throws InvalidInput on functions, pi, fractional powers or
  /// division by zero.
  Rational eval_exact(const std::vector<Rational>& x) const;
  double eval(const std::vector<double>& x) const;
  /// Value plus exact (forward-mode) gradient.
  double eval_gradient(const std::vector<double>& x, std::vector<double>& grad) const;

  struct Node;

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
  std::size_t arity_ = 0;
};

}  // namespace affinekit
