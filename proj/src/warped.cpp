#include "warpcurv/warped.hpp"

#include <cmath>

namespace warpcurv {

WarpedProductSpec::WarpedProductSpec(MetricSpec base, MetricSpec fiber, Expression f, Expression h)
    : base_(std::move(base)),
      fiber_(std::move(fiber)),
      f_{std::move(f), true},
      h_{std::move(h), true} {
  if (base_.dim() == 0 || fiber_.dim() == 0) throw Error("base and fiber must have dimension >= 1");
  if (f_.expr.arity() != base_.dim())
    throw Error("warping function f must have the base arity " + std::to_string(base_.dim()));
  if (h_.expr.arity() != fiber_.dim())
    throw Error("warping function h must have the fiber arity " + std::to_string(fiber_.dim()));
}

Point ProductPoint::concat() const {
  Point z(base.size() + fiber.size());
  z << base, fiber;
  return z;
}

ProductPoint ProductPoint::split(const Point& z, std::size_t base_dim) {
  const auto m = static_cast<Eigen::Index>(base_dim);
  if (z.size() < m) throw Error("product point shorter than the base dimension");
  return {z.head(m), z.tail(z.size() - m)};
}

namespace {

double positive_warp(const ScalarFieldSpec& field, const Eigen::VectorXd& x, char which) {
  const double v = evaluate(field.expr, as_span(x));
  if (field.positivity_required && !(v > 0.0)) throw NonpositiveWarp(which, v);
  return v;
}

}  // namespace

double warp_f_at(const WarpedProductSpec& wp, const Eigen::VectorXd& base) {
  return positive_warp(wp.f(), base, 'f');
}

double warp_h_at(const WarpedProductSpec& wp, const Eigen::VectorXd& fiber) {
  return positive_warp(wp.h(), fiber, 'h');
}

Eigen::MatrixXd assemble_metric(const WarpedProductSpec& wp, const ProductPoint& pt) {
  const auto m = static_cast<Eigen::Index>(wp.base_dim());
  const auto n = static_cast<Eigen::Index>(wp.fiber_dim());
  if (pt.base.size() != m || pt.fiber.size() != n)
    throw Error("product point does not match the base/fiber dimensions");
  const double f = warp_f_at(wp, pt.base);
  const double h = warp_h_at(wp, pt.fiber);
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(m + n, m + n);
  g.topLeftCorner(m, m) = (h * h) * metric_at(wp.base(), pt.base);
  g.bottomRightCorner(n, n) = (f * f) * metric_at(wp.fiber(), pt.fiber);
  return g;
}

MetricSpec as_plain_metric(const WarpedProductSpec& wp) {
  const std::size_t m = wp.base_dim();
  const std::size_t n = wp.fiber_dim();
  const std::size_t dim = m + n;
  const Expression f = wp.f().expr.embed(dim, 0);
  const Expression h = wp.h().expr.embed(dim, m);
  const Expression h2 = square(h);
  const Expression f2 = square(f);
  const Expression zero = Expression::constant(0.0, dim);

  std::vector<Expression> upper;
  upper.reserve(dim * (dim + 1) / 2);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = i; j < dim; ++j) {
      if (j < m)
        upper.push_back(h2 * wp.base().component(i, j).embed(dim, 0));
      else if (i >= m)
        upper.push_back(f2 * wp.fiber().component(i - m, j - m).embed(dim, m));
      else
        upper.push_back(zero);
    }
  return MetricSpec(wp.base().name() + "*" + wp.fiber().name(), dim, std::move(upper));
}

}  // namespace warpcurv
