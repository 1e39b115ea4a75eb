#pragma once

// Single-chart geometry: metric specifications, their inverse, Christoffel
// symbols from exact expression jets, and the covariant Hessian/Laplacian of
// scalar fields.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "warpcurv/expr.hpp"
#include "warpcurv/tensors.hpp"

namespace warpcurv {

inline std::span<const double> as_span(const Eigen::VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

/// Symmetric dim×dim grid of component expressions. Only the upper triangle
/// is stored, so (i,j) and (j,i) name the same expression object.
class MetricSpec {
 public:
  MetricSpec() = default;

  /// `upper` lists g_ij for i ≤ j in row-major order.
  MetricSpec(std::string name, std::size_t dim, std::vector<Expression> upper);

  static MetricSpec diagonal(std::string name, std::vector<Expression> diag);
  static MetricSpec identity(std::string name, std::size_t dim);

  std::size_t dim() const noexcept { return dim_; }
  const std::string& name() const noexcept { return name_; }
  const Expression& component(std::size_t i, std::size_t j) const;

 private:
  std::size_t slot(std::size_t i, std::size_t j) const;

  std::string name_;
  std::size_t dim_ = 0;
  std::vector<Expression> upper_;
};

/// Scalar function on a chart, optionally required to be positive wherever
/// it is evaluated.
struct ScalarFieldSpec {
  Expression expr;
  bool positivity_required = false;
};

Eigen::MatrixXd metric_at(const MetricSpec& spec, const Point& pt);

struct InverseMetric {
  Eigen::MatrixXd inverse;
  double determinant = 0.0;
};

/// LU with partial pivoting. Throws DegenerateMetric when
/// |det| < 1e-12 · (max |g_ij|)^dim.
InverseMetric invert_metric(const Eigen::MatrixXd& g);
InverseMetric inverse_metric_at(const MetricSpec& spec, const Point& pt);

/// ∂_k g_ij as dg(i, j, k), exact from first-order duals.
Eigen::Tensor<double, 3> metric_derivatives(const MetricSpec& spec, const Point& pt);

/// Γ^k_{ij} = ½ g^{kl}(∂_i g_jl + ∂_j g_il − ∂_l g_ij), exactly symmetric in (i, j).
Christoffel christoffels_from(const Eigen::MatrixXd& inverse, const Eigen::Tensor<double, 3>& dg);
Christoffel christoffels_of(const MetricSpec& spec, const Point& pt);

/// H_ij = ∂_i∂_j f − Γ^k_{ij} ∂_k f from a field jet and known Christoffels.
Eigen::MatrixXd covariant_hessian(const Christoffel& gamma, const Jet2& jet);
Eigen::MatrixXd covariant_hessian(const MetricSpec& spec, const ScalarFieldSpec& field, const Point& pt);

/// Δf = g^{ij} H_ij.
double laplacian(const MetricSpec& spec, const ScalarFieldSpec& field, const Point& pt);

}  // namespace warpcurv
