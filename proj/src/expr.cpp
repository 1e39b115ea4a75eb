#include "warpcurv/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <numbers>
#include <optional>
#include <utility>

namespace warpcurv {

namespace {

struct FunctionName {
  std::string_view name;
  UnaryOp op;
};

constexpr std::array<FunctionName, 9> kFunctions{{
    {"sin", UnaryOp::Sin},
    {"cos", UnaryOp::Cos},
    {"tan", UnaryOp::Tan},
    {"exp", UnaryOp::Exp},
    {"log", UnaryOp::Log},
    {"sqrt", UnaryOp::Sqrt},
    {"sinh", UnaryOp::Sinh},
    {"cosh", UnaryOp::Cosh},
    {"tanh", UnaryOp::Tanh},
}};

std::optional<UnaryOp> lookup_function(std::string_view name) {
  for (const auto& f : kFunctions)
    if (f.name == name) return f.op;
  return std::nullopt;
}

std::string_view function_name(UnaryOp op) {
  for (const auto& f : kFunctions)
    if (f.op == op) return f.name;
  return "-";
}

char binary_symbol(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add:
      return '+';
    case BinaryOp::Sub:
      return '-';
    case BinaryOp::Mul:
      return '*';
    case BinaryOp::Div:
      return '/';
    case BinaryOp::Pow:
      return '^';
  }
  return '?';
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  return v < 0.0 ? "(" + s + ")" : s;
}

}  // namespace

// ---------------------------------------------------------------------------
// Parser

class ExpressionParser {
 public:
  ExpressionParser(std::string_view text, std::size_t arity) : text_(text), arity_(arity) {}

  Expression run() {
    if (arity_ == 0) throw Error("expression arity must be at least 1");
    skip_space();
    if (at_end()) throw SyntaxError(pos_, "empty expression");
    parse_sum();
    skip_space();
    if (!at_end()) throw SyntaxError(pos_, std::string("unexpected '") + text_[pos_] + "'");
    return Expression(std::make_shared<const std::vector<ExprNode>>(std::move(nodes_)), arity_);
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }
  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip_space();
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::size_t push(ExprNode n) {
    nodes_.push_back(n);
    return nodes_.size() - 1;
  }

  std::size_t push_constant(double v) {
    ExprNode n{ExprNode::Kind::Constant};
    n.value = v;
    return push(n);
  }

  // Folds operators whose operands are literal constants so that exponents
  // such as `-2` or `1/2` stay constants; domain failures are left unfolded.
  std::size_t push_unary(UnaryOp op, std::size_t a) {
    if (nodes_[a].kind == ExprNode::Kind::Constant) {
      if (op == UnaryOp::Neg) {
        nodes_[a].value = -nodes_[a].value;
        return a;
      }
      try {
        const double v = detail::apply_unary(op, nodes_[a].value, nodes_, a);
        nodes_[a].value = v;
        return a;
      } catch (const DomainError&) {
      }
    }
    ExprNode n{ExprNode::Kind::Unary};
    n.unary = op;
    n.lhs = a;
    return push(n);
  }

  std::size_t push_binary(BinaryOp op, std::size_t a, std::size_t b) {
    ExprNode n{ExprNode::Kind::Binary};
    n.binary = op;
    n.lhs = a;
    n.rhs = b;
    const std::size_t at = push(n);
    // Both operands are the two most recent constants when folding applies.
    if (nodes_[a].kind == ExprNode::Kind::Constant && nodes_[b].kind == ExprNode::Kind::Constant &&
        b == a + 1 && at == b + 1) {
      try {
        const double v = detail::apply_binary(op, nodes_[a].value, nodes_[b].value, nodes_, at);
        nodes_.resize(a + 1);
        nodes_[a] = ExprNode{ExprNode::Kind::Constant};
        nodes_[a].value = v;
        return a;
      } catch (const DomainError&) {
      }
    }
    return at;
  }

  std::size_t parse_sum() {
    std::size_t lhs = parse_product();
    for (;;) {
      if (accept('+'))
        lhs = push_binary(BinaryOp::Add, lhs, parse_product());
      else if (accept('-'))
        lhs = push_binary(BinaryOp::Sub, lhs, parse_product());
      else
        return lhs;
    }
  }

  std::size_t parse_product() {
    std::size_t lhs = parse_unary();
    for (;;) {
      if (accept('*'))
        lhs = push_binary(BinaryOp::Mul, lhs, parse_unary());
      else if (accept('/'))
        lhs = push_binary(BinaryOp::Div, lhs, parse_unary());
      else
        return lhs;
    }
  }

  std::size_t parse_unary() {
    if (accept('-')) return push_unary(UnaryOp::Neg, parse_unary());
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  std::size_t parse_power() {
    const std::size_t base = parse_primary();
    if (accept('^')) return push_binary(BinaryOp::Pow, base, parse_unary());
    return base;
  }

  std::size_t parse_primary() {
    skip_space();
    if (at_end()) throw SyntaxError(pos_, "unexpected end of expression");
    const char c = peek();
    if (c == '(') {
      ++pos_;
      const std::size_t inner = parse_sum();
      if (!accept(')')) throw SyntaxError(pos_, "expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    throw SyntaxError(pos_, std::string("unexpected '") + c + "'");
  }

  std::size_t parse_number() {
    const std::size_t start = pos_;
    while (!at_end() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.')) ++pos_;
    if (!at_end() && (peek() == 'e' || peek() == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
      if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look]))) {
        pos_ = look;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
      }
    }
    double value = 0.0;
    const auto* first = text_.data() + start;
    const auto* last = text_.data() + pos_;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) throw SyntaxError(start, "malformed number");
    return push_constant(value);
  }

  std::size_t parse_identifier() {
    const std::size_t start = pos_;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);

    if (const auto op = lookup_function(name)) {
      if (!accept('(')) throw SyntaxError(pos_, "expected '(' after " + std::string(name));
      const std::size_t arg = parse_sum();
      if (!accept(')')) throw SyntaxError(pos_, "expected ')' to close " + std::string(name) + "(");
      return push_unary(*op, arg);
    }
    skip_space();
    if (peek() == '(') throw UnknownIdentifier(std::string(name));
    if (name == "pi") return push_constant(std::numbers::pi);
    if (name == "e") return push_constant(std::numbers::e);
    if (name.size() >= 2 && name[0] == 'x') {
      std::size_t index = 0;
      const auto [ptr, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), index);
      if (ec == std::errc() && ptr == name.data() + name.size()) {
        if (index >= arity_) throw ArityViolation(index, arity_);
        ExprNode n{ExprNode::Kind::Variable};
        n.index = index;
        return push(n);
      }
    }
    throw UnknownIdentifier(std::string(name));
  }

  std::string_view text_;
  std::size_t arity_;
  std::size_t pos_ = 0;
  std::vector<ExprNode> nodes_;
};

Expression parse_expression(std::string_view text, std::size_t arity) {
  return ExpressionParser(text, arity).run();
}

// ---------------------------------------------------------------------------
// Construction and rendering

Expression Expression::constant(double value, std::size_t arity) {
  ExprNode n{ExprNode::Kind::Constant};
  n.value = value;
  return Expression(std::make_shared<const std::vector<ExprNode>>(1, n), arity);
}

Expression Expression::variable(std::size_t index, std::size_t arity) {
  if (index >= arity) throw ArityViolation(index, arity);
  ExprNode n{ExprNode::Kind::Variable};
  n.index = index;
  return Expression(std::make_shared<const std::vector<ExprNode>>(1, n), arity);
}

bool Expression::is_constant() const {
  for (const auto& n : nodes())
    if (n.kind == ExprNode::Kind::Variable) return false;
  return true;
}

std::string detail::render_node(std::span<const ExprNode> nodes, std::size_t node) {
  const ExprNode& n = nodes[node];
  switch (n.kind) {
    case ExprNode::Kind::Constant:
      return format_number(n.value);
    case ExprNode::Kind::Variable:
      return "x" + std::to_string(n.index);
    case ExprNode::Kind::Unary:
      if (n.unary == UnaryOp::Neg) return "(-" + render_node(nodes, n.lhs) + ")";
      return std::string(function_name(n.unary)) + "(" + render_node(nodes, n.lhs) + ")";
    case ExprNode::Kind::Binary:
      return "(" + render_node(nodes, n.lhs) + " " + binary_symbol(n.binary) + " " +
             render_node(nodes, n.rhs) + ")";
  }
  return {};
}

void detail::throw_domain(std::span<const ExprNode> nodes, std::size_t node, const std::string& what) {
  throw DomainError(render_node(nodes, node), what);
}

std::string Expression::render(std::size_t node) const { return detail::render_node(nodes(), node); }

std::string Expression::to_string() const { return empty() ? std::string() : render(nodes().size() - 1); }

Expression Expression::embed(std::size_t arity, std::size_t offset) const {
  auto copy = std::make_shared<std::vector<ExprNode>>(nodes().begin(), nodes().end());
  for (auto& n : *copy) {
    if (n.kind != ExprNode::Kind::Variable) continue;
    n.index += offset;
    if (n.index >= arity) throw ArityViolation(n.index, arity);
  }
  return Expression(std::move(copy), arity);
}

Expression apply(UnaryOp op, const Expression& a) {
  auto nodes = std::make_shared<std::vector<ExprNode>>(a.nodes().begin(), a.nodes().end());
  ExprNode n{ExprNode::Kind::Unary};
  n.unary = op;
  n.lhs = nodes->size() - 1;
  nodes->push_back(n);
  return Expression(std::move(nodes), a.arity());
}

Expression apply(BinaryOp op, const Expression& a, const Expression& b) {
  if (a.arity() != b.arity())
    throw Error("cannot combine expressions of arity " + std::to_string(a.arity()) + " and " +
                std::to_string(b.arity()));
  auto nodes = std::make_shared<std::vector<ExprNode>>(a.nodes().begin(), a.nodes().end());
  const std::size_t shift = nodes->size();
  for (ExprNode n : b.nodes()) {
    if (n.kind == ExprNode::Kind::Unary) n.lhs += shift;
    if (n.kind == ExprNode::Kind::Binary) {
      n.lhs += shift;
      n.rhs += shift;
    }
    nodes->push_back(n);
  }
  ExprNode n{ExprNode::Kind::Binary};
  n.binary = op;
  n.lhs = shift - 1;
  n.rhs = nodes->size() - 1;
  nodes->push_back(n);
  return Expression(std::move(nodes), a.arity());
}

Expression operator+(const Expression& a, const Expression& b) { return apply(BinaryOp::Add, a, b); }
Expression operator-(const Expression& a, const Expression& b) { return apply(BinaryOp::Sub, a, b); }
Expression operator*(const Expression& a, const Expression& b) { return apply(BinaryOp::Mul, a, b); }
Expression operator/(const Expression& a, const Expression& b) { return apply(BinaryOp::Div, a, b); }
Expression operator-(const Expression& a) { return apply(UnaryOp::Neg, a); }
Expression square(const Expression& a) { return a * a; }

// ---------------------------------------------------------------------------
// Evaluation

double evaluate(const Expression& expr, std::span<const double> point) {
  return expr.evaluate<double>(point);
}

Eigen::VectorXd gradient(const Expression& expr, std::span<const double> point) {
  using D = Dual<double>;
  const std::size_t n = point.size();
  Eigen::VectorXd g(static_cast<Eigen::Index>(n));
  std::vector<D> seeded(n);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) seeded[i] = D(point[i], i == k ? 1.0 : 0.0);
    g(static_cast<Eigen::Index>(k)) = expr.evaluate<D>(seeded).d;
  }
  if (n == 0) expr.evaluate<double>(point);
  return g;
}

Jet2 jet2(const Expression& expr, std::span<const double> point) {
  using D = Dual<double>;
  using DD = Dual<D>;
  const std::size_t n = point.size();
  const auto N = static_cast<Eigen::Index>(n);
  Jet2 jet{0.0, Eigen::VectorXd::Zero(N), Eigen::MatrixXd::Zero(N, N)};
  if (n == 0) {
    jet.value = expr.evaluate<double>(point);
    return jet;
  }
  std::vector<DD> seeded(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k)
        seeded[k] = DD(D(point[k], k == j ? 1.0 : 0.0), D(k == i ? 1.0 : 0.0, 0.0));
      const DD r = expr.evaluate<DD>(seeded);
      const auto I = static_cast<Eigen::Index>(i);
      const auto J = static_cast<Eigen::Index>(j);
      jet.hessian(I, J) = r.d.d;
      jet.hessian(J, I) = r.d.d;
      if (i == j) {
        jet.gradient(I) = r.d.v;
        jet.value = r.v.v;
      }
    }
  }
  return jet;
}

}  // namespace warpcurv
