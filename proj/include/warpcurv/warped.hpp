#pragma once

// Doubly warped product M = B ×_{h,f} F with g_M = h(q)² g_B(p) ⊕ f(p)² g_F(q).
// Product coordinates put the m base coordinates first (indices 0..m-1)
// followed by the n fiber coordinates (indices m..m+n-1).

#include <cstddef>

#include <Eigen/Dense>

#include "warpcurv/geometry.hpp"

namespace warpcurv {

class WarpedProductSpec {
 public:
  /// f is a field on the base chart, h a field on the fiber chart. Both are
  /// flagged positivity_required.
  WarpedProductSpec(MetricSpec base, MetricSpec fiber, Expression f, Expression h);

  const MetricSpec& base() const noexcept { return base_; }
  const MetricSpec& fiber() const noexcept { return fiber_; }
  const ScalarFieldSpec& f() const noexcept { return f_; }
  const ScalarFieldSpec& h() const noexcept { return h_; }

  std::size_t base_dim() const noexcept { return base_.dim(); }
  std::size_t fiber_dim() const noexcept { return fiber_.dim(); }
  std::size_t dim() const noexcept { return base_.dim() + fiber_.dim(); }

 private:
  MetricSpec base_;
  MetricSpec fiber_;
  ScalarFieldSpec f_;
  ScalarFieldSpec h_;
};

struct ProductPoint {
  Eigen::VectorXd base;
  Eigen::VectorXd fiber;

  /// Coordinates in the natural product chart.
  Point concat() const;
  static ProductPoint split(const Point& z, std::size_t base_dim);
};

/// f(p), throwing NonpositiveWarp('f', value) unless strictly positive.
double warp_f_at(const WarpedProductSpec& wp, const Eigen::VectorXd& base);
/// h(q), throwing NonpositiveWarp('h', value) unless strictly positive.
double warp_h_at(const WarpedProductSpec& wp, const Eigen::VectorXd& fiber);

Eigen::MatrixXd assemble_metric(const WarpedProductSpec& wp, const ProductPoint& pt);

/// The (m+n)-dimensional metric with components h(y)²·g_B,ij(x) and
/// f(x)²·g_F,αβ(y) as ordinary expressions; cross components are the
/// constant 0.
MetricSpec as_plain_metric(const WarpedProductSpec& wp);

}  // namespace warpcurv
