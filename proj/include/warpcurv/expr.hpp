#pragma once

// Real-valued expressions over the coordinates x0..x{arity-1} of a chart.
//
// Grammar (recursive descent, standard precedence):
//   sum     := product (('+' | '-') product)*
//   product := unary (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' unary)?          right-associative
//   primary := number | 'pi' | 'e' | x<k> | func '(' sum ')' | '(' sum ')'
// so that `-x0^2` is `-(x0^2)` and `2^-x0` is `2^(-x0)`.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "warpcurv/dual.hpp"
#include "warpcurv/errors.hpp"

namespace warpcurv {

enum class UnaryOp : std::uint8_t { Neg, Sin, Cos, Tan, Exp, Log, Sqrt, Sinh, Cosh, Tanh };
enum class BinaryOp : std::uint8_t { Add, Sub, Mul, Div, Pow };

/// One AST node. Children always precede their parent in Expression::nodes().
struct ExprNode {
  enum class Kind : std::uint8_t { Constant, Variable, Unary, Binary } kind;
  UnaryOp unary = UnaryOp::Neg;
  BinaryOp binary = BinaryOp::Add;
  double value = 0.0;      // Constant
  std::size_t index = 0;   // Variable
  std::size_t lhs = 0;     // Unary operand / Binary left
  std::size_t rhs = 0;     // Binary right
};

/// Value, gradient and Hessian of an expression at a point.
struct Jet2 {
  double value = 0.0;
  Eigen::VectorXd gradient;
  Eigen::MatrixXd hessian;
};

/// Immutable parsed expression. Copies share the node storage.
class Expression {
 public:
  Expression() = default;

  static Expression constant(double value, std::size_t arity);
  static Expression variable(std::size_t index, std::size_t arity);

  std::size_t arity() const noexcept { return arity_; }
  bool empty() const noexcept { return !nodes_ || nodes_->empty(); }
  std::span<const ExprNode> nodes() const noexcept {
    return nodes_ ? std::span<const ExprNode>(*nodes_) : std::span<const ExprNode>{};
  }

  /// True when the tree contains no variable reference.
  bool is_constant() const;

  /// Evaluate over any scalar type closed under the elementary functions
  /// (double, Dual<double>, Dual<Dual<double>>, ...).
  template <typename Scalar>
  Scalar evaluate(std::span<const Scalar> point) const;

  /// Fully parenthesised text that parses back to an equivalent tree.
  std::string to_string() const;

  /// Same tree viewed in a chart of dimension `arity` with every variable
  /// index shifted by `offset`.
  Expression embed(std::size_t arity, std::size_t offset) const;

  friend Expression apply(UnaryOp op, const Expression& a);
  friend Expression apply(BinaryOp op, const Expression& a, const Expression& b);

 private:
  Expression(std::shared_ptr<const std::vector<ExprNode>> nodes, std::size_t arity)
      : nodes_(std::move(nodes)), arity_(arity) {}
  friend class ExpressionParser;

  std::string render(std::size_t node) const;

  std::shared_ptr<const std::vector<ExprNode>> nodes_;
  std::size_t arity_ = 0;
};

Expression parse_expression(std::string_view text, std::size_t arity);

double evaluate(const Expression& expr, std::span<const double> point);

/// First derivatives only (one first-order dual pass per coordinate).
Eigen::VectorXd gradient(const Expression& expr, std::span<const double> point);

/// Value, gradient and Hessian by nested dual numbers; exact up to rounding.
Jet2 jet2(const Expression& expr, std::span<const double> point);

Expression operator+(const Expression& a, const Expression& b);
Expression operator-(const Expression& a, const Expression& b);
Expression operator*(const Expression& a, const Expression& b);
Expression operator/(const Expression& a, const Expression& b);
Expression operator-(const Expression& a);
Expression square(const Expression& a);

// ---------------------------------------------------------------------------

namespace detail {

inline bool is_integer(double c) { return std::isfinite(c) && std::floor(c) == c; }

std::string render_node(std::span<const ExprNode> nodes, std::size_t node);

[[noreturn]] void throw_domain(std::span<const ExprNode> nodes, std::size_t node,
                               const std::string& what);

template <typename Scalar>
Scalar apply_unary(UnaryOp op, const Scalar& a, std::span<const ExprNode> nodes, std::size_t at) {
  using std::cos, std::cosh, std::exp, std::log, std::sin, std::sinh, std::sqrt, std::tan,
      std::tanh;
  const double x = primal(a);
  switch (op) {
    case UnaryOp::Neg:
      return -a;
    case UnaryOp::Sin:
      return sin(a);
    case UnaryOp::Cos:
      return cos(a);
    case UnaryOp::Tan:
      // No double sits exactly on a pole; rounding distance counts as hitting it.
      if (std::abs(std::cos(x)) <= 1e-15 * std::max(1.0, std::abs(x))) throw_domain(nodes, at, "tan at a pole");
      return tan(a);
    case UnaryOp::Exp:
      return exp(a);
    case UnaryOp::Log:
      if (!(x > 0.0)) throw_domain(nodes, at, "log of nonpositive argument");
      return log(a);
    case UnaryOp::Sqrt:
      if (!(x >= 0.0)) throw_domain(nodes, at, "sqrt of negative argument");
      if (is_dual_v<Scalar> && x == 0.0) throw_domain(nodes, at, "sqrt not differentiable at 0");
      return sqrt(a);
    case UnaryOp::Sinh:
      return sinh(a);
    case UnaryOp::Cosh:
      return cosh(a);
    case UnaryOp::Tanh:
      return tanh(a);
  }
  return a;
}

template <typename Scalar>
Scalar apply_binary(BinaryOp op, const Scalar& a, const Scalar& b, std::span<const ExprNode> nodes,
                    std::size_t at) {
  using std::exp, std::log;
  switch (op) {
    case BinaryOp::Add:
      return a + b;
    case BinaryOp::Sub:
      return a - b;
    case BinaryOp::Mul:
      return a * b;
    case BinaryOp::Div:
      if (primal(b) == 0.0) throw_domain(nodes, at, "division by zero");
      return a / b;
    case BinaryOp::Pow: {
      const ExprNode& exponent = nodes[nodes[at].rhs];
      const double base = primal(a);
      if (exponent.kind == ExprNode::Kind::Constant) {
        const double c = exponent.value;
        if (!is_integer(c) && base < 0.0) throw_domain(nodes, at, "fractional power of negative base");
        if (base == 0.0 && (c < 0.0 || (is_dual_v<Scalar> && !is_integer(c) && c < 2.0)))
          throw_domain(nodes, at, "singular power of zero");
        return pow_const(a, c);
      }
      if (!(base > 0.0)) throw_domain(nodes, at, "variable exponent requires a positive base");
      return exp(b * log(a));
    }
  }
  return a;
}

}  // namespace detail

template <typename Scalar>
Scalar Expression::evaluate(std::span<const Scalar> point) const {
  if (point.size() != arity_)
    throw Error("point has " + std::to_string(point.size()) + " coordinates, expression arity is " +
                std::to_string(arity_));
  const auto ns = nodes();
  std::vector<Scalar> values(ns.size());
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const ExprNode& n = ns[i];
    switch (n.kind) {
      case ExprNode::Kind::Constant:
        values[i] = Scalar(n.value);
        break;
      case ExprNode::Kind::Variable:
        values[i] = point[n.index];
        break;
      case ExprNode::Kind::Unary:
        values[i] = detail::apply_unary(n.unary, values[n.lhs], ns, i);
        break;
      case ExprNode::Kind::Binary:
        values[i] = detail::apply_binary(n.binary, values[n.lhs], values[n.rhs], ns, i);
        break;
    }
  }
  return values.back();
}

}  // namespace warpcurv
