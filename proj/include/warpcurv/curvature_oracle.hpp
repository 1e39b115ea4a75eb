#pragma once

// Brute-force curvature of an arbitrary MetricSpec. Christoffel symbols come
// from exact expression jets; their coordinate derivatives are the only
// finite-differenced layer (central differences + Richardson extrapolation).
//
// This path knows nothing about warped products and is the independent check
// for the closed-form block formulas.

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "warpcurv/geometry.hpp"
#include "warpcurv/tensors.hpp"

namespace warpcurv {

struct DiffPolicy {
  double base_step = 1e-4;
  int richardson_levels = 2;  // 1: plain central difference
  bool relative_scaling = true;

  void validate() const;
};

/// ∂_m Γ^k_{ij} stored as (k, i, j, m).
Eigen::Tensor<double, 4> christoffel_derivatives_fd(const MetricSpec& spec, const Point& pt,
                                                    const DiffPolicy& policy);

/// R^μ_{νλρ} = ∂_ρ Γ^μ_{λν} − ∂_λ Γ^μ_{ρν} + Γ^μ_{ρσ}Γ^σ_{λν} − Γ^μ_{λσ}Γ^σ_{ρν}
/// for Convention::Paper; negated for Convention::Common.
Riemann riemann_fd(const MetricSpec& spec, const Point& pt, const DiffPolicy& policy = {},
                   Convention convention = Convention::Paper);

/// Contraction of riemann_fd. Throws NumericalInstability when the result is
/// asymmetric beyond 1e-8 · scale.
Eigen::MatrixXd ricci_fd(const MetricSpec& spec, const Point& pt, const DiffPolicy& policy = {},
                         Convention convention = Convention::Paper);

double scalar_fd(const MetricSpec& spec, const Point& pt, const DiffPolicy& policy = {},
                 Convention convention = Convention::Paper);

/// Sectional curvature of span{u, v}; DegeneratePlane when the Gram
/// determinant vanishes (|den| ≤ 1e-10 · scale).
double sectional_fd(const MetricSpec& spec, const Point& pt, const Eigen::VectorXd& u,
                    const Eigen::VectorXd& v, const DiffPolicy& policy = {},
                    Convention convention = Convention::Paper);

/// Full bundle in one pass (Riemann computed once).
CurvatureBundle curvature_fd(const MetricSpec& spec, const Point& pt, const DiffPolicy& policy = {},
                             Convention convention = Convention::Paper);

// ---------------------------------------------------------------------------
// Bundle comparison

struct TensorDeviation {
  std::string tensor;
  double max_abs = 0.0;
  /// max_abs / max(1, largest |component| of the reference).
  double max_rel = 0.0;
  std::vector<Eigen::Index> worst_index{};
};

struct BundleReport {
  std::array<TensorDeviation, 4> tensors;  // christoffel, riemann, ricci, scalar

  double max_rel() const;
  double max_abs() const;
  const TensorDeviation& worst() const;
};

/// Deviation of `a` from the reference `b`.
BundleReport compare_bundles(const CurvatureBundle& a, const CurvatureBundle& b);

}  // namespace warpcurv
