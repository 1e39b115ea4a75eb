#include "warpcurv/geometry.hpp"

#include <cmath>

namespace warpcurv {

MetricSpec::MetricSpec(std::string name, std::size_t dim, std::vector<Expression> upper)
    : name_(std::move(name)), dim_(dim), upper_(std::move(upper)) {
  if (dim_ == 0) throw Error("metric '" + name_ + "' must have dimension >= 1");
  if (upper_.size() != dim_ * (dim_ + 1) / 2)
    throw Error("metric '" + name_ + "' needs " + std::to_string(dim_ * (dim_ + 1) / 2) +
                " upper-triangular components, got " + std::to_string(upper_.size()));
  for (const auto& e : upper_)
    if (e.empty() || e.arity() != dim_)
      throw Error("metric '" + name_ + "' component has arity " + std::to_string(e.arity()) +
                  ", expected " + std::to_string(dim_));
}

MetricSpec MetricSpec::diagonal(std::string name, std::vector<Expression> diag) {
  const std::size_t n = diag.size();
  if (n == 0) throw Error("metric '" + name + "' must have dimension >= 1");
  std::vector<Expression> upper;
  upper.reserve(n * (n + 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      upper.push_back(i == j ? diag[i] : Expression::constant(0.0, n));
  return MetricSpec(std::move(name), n, std::move(upper));
}

MetricSpec MetricSpec::identity(std::string name, std::size_t dim) {
  std::vector<Expression> diag;
  for (std::size_t i = 0; i < dim; ++i) diag.push_back(Expression::constant(1.0, dim));
  return diagonal(std::move(name), std::move(diag));
}

std::size_t MetricSpec::slot(std::size_t i, std::size_t j) const {
  if (i > j) std::swap(i, j);
  if (j >= dim_) throw Error("metric index out of range");
  // Row i of the upper triangle starts after i rows of lengths dim, dim-1, ...
  return i * dim_ - i * (i - 1) / 2 + (j - i);
}

const Expression& MetricSpec::component(std::size_t i, std::size_t j) const {
  return upper_[slot(i, j)];
}

namespace {

void check_point(const MetricSpec& spec, const Point& pt) {
  if (static_cast<std::size_t>(pt.size()) != spec.dim())
    throw Error("point has " + std::to_string(pt.size()) + " coordinates, metric '" + spec.name() +
                "' has dimension " + std::to_string(spec.dim()));
}

}  // namespace

Eigen::MatrixXd metric_at(const MetricSpec& spec, const Point& pt) {
  check_point(spec, pt);
  const auto n = static_cast<Eigen::Index>(spec.dim());
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) {
      const double v = evaluate(spec.component(i, j), as_span(pt));
      g(i, j) = v;
      g(j, i) = v;
    }
  return g;
}

InverseMetric invert_metric(const Eigen::MatrixXd& g) {
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(g);
  const double det = lu.determinant();
  const double entry_scale = g.cwiseAbs().maxCoeff();
  const double threshold = 1e-12 * std::pow(entry_scale, static_cast<double>(g.rows()));
  if (!std::isfinite(det) || std::abs(det) < threshold || entry_scale == 0.0) throw DegenerateMetric(det);
  return {lu.inverse(), det};
}

InverseMetric inverse_metric_at(const MetricSpec& spec, const Point& pt) {
  return invert_metric(metric_at(spec, pt));
}

Eigen::Tensor<double, 3> metric_derivatives(const MetricSpec& spec, const Point& pt) {
  check_point(spec, pt);
  const auto n = static_cast<Eigen::Index>(spec.dim());
  Eigen::Tensor<double, 3> dg(n, n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) {
      const Expression& e = spec.component(i, j);
      if (e.is_constant()) {
        for (Eigen::Index k = 0; k < n; ++k) dg(i, j, k) = dg(j, i, k) = 0.0;
        continue;
      }
      const Eigen::VectorXd grad = gradient(e, as_span(pt));
      for (Eigen::Index k = 0; k < n; ++k) dg(i, j, k) = dg(j, i, k) = grad(k);
    }
  return dg;
}

Christoffel christoffels_from(const Eigen::MatrixXd& inverse, const Eigen::Tensor<double, 3>& dg) {
  const auto n = inverse.rows();
  Christoffel gamma(n, n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) {
      for (Eigen::Index k = 0; k < n; ++k) {
        double sum = 0.0;
        for (Eigen::Index l = 0; l < n; ++l)
          sum += inverse(k, l) * (dg(j, l, i) + dg(i, l, j) - dg(i, j, l));
        gamma(k, i, j) = 0.5 * sum;
        gamma(k, j, i) = 0.5 * sum;
      }
    }
  return gamma;
}

Christoffel christoffels_of(const MetricSpec& spec, const Point& pt) {
  return christoffels_from(inverse_metric_at(spec, pt).inverse, metric_derivatives(spec, pt));
}

Eigen::MatrixXd covariant_hessian(const Christoffel& gamma, const Jet2& jet) {
  const auto n = jet.gradient.size();
  Eigen::MatrixXd h(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) {
      double v = jet.hessian(i, j);
      for (Eigen::Index k = 0; k < n; ++k) v -= gamma(k, i, j) * jet.gradient(k);
      h(i, j) = v;
      h(j, i) = v;
    }
  return h;
}

Eigen::MatrixXd covariant_hessian(const MetricSpec& spec, const ScalarFieldSpec& field, const Point& pt) {
  if (field.expr.arity() != spec.dim()) throw Error("scalar field arity does not match the metric dimension");
  return covariant_hessian(christoffels_of(spec, pt), jet2(field.expr, as_span(pt)));
}

double laplacian(const MetricSpec& spec, const ScalarFieldSpec& field, const Point& pt) {
  const Eigen::MatrixXd h = covariant_hessian(spec, field, pt);
  return inverse_metric_at(spec, pt).inverse.cwiseProduct(h).sum();
}

}  // namespace warpcurv
