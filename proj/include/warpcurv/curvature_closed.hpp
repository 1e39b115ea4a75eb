#pragma once

// Closed-form curvature of a doubly warped product B ×_{h,f} F, assembled
// block by block from factor-manifold quantities. Every g, g^{-1}, norm and
// Laplacian below is taken in the UNWARPED factor metrics g_B, g_F.
//
// Factor curvature (^B R, ^F R and their contractions) is obtained from the
// finite-difference oracle applied to each factor on its own.

#include <cstddef>

#include <Eigen/Dense>

#include "warpcurv/curvature_oracle.hpp"
#include "warpcurv/warped.hpp"

namespace warpcurv {

struct ClosedFormOptions {
  DiffPolicy policy;  // for the factor Riemann tensors
  Convention convention = Convention::Paper;
};

/// Everything the block formulas need from one factor at one point, for a
/// warping function w living on that factor.
struct FactorTerms {
  Eigen::MatrixXd metric;
  Eigen::MatrixXd inverse;
  Christoffel christoffel;
  double warp = 0.0;                // w
  Eigen::VectorXd warp_gradient;    // ∂w
  Eigen::MatrixXd warp_hessian;     // D_i ∂_j w
  double warp_laplacian = 0.0;      // Δw
  double warp_gradient_norm2 = 0.0; // ‖∂w‖²
};

FactorTerms factor_terms(const MetricSpec& metric, const ScalarFieldSpec& warp, const Eigen::VectorXd& x, char which);

/// Γ^k_{ij} of M by block.
Christoffel christoffels_closed(const WarpedProductSpec& wp, const ProductPoint& pt);

/// R^i_{jkl} of M by block in the requested convention.
Riemann riemann_closed(const WarpedProductSpec& wp, const ProductPoint& pt, const ClosedFormOptions& options = {});

/// Ricci tensor of M by block.
Eigen::MatrixXd ricci_closed(const WarpedProductSpec& wp, const ProductPoint& pt,
                             const ClosedFormOptions& options = {});

struct ScalarCurvature {
  double contraction = 0.0;  // g_M^{ij} Ric_ij, authoritative
  double formula = 0.0;      // direct factor-quantity formula
};

ScalarCurvature scalar_closed(const WarpedProductSpec& wp, const ProductPoint& pt,
                              const ClosedFormOptions& options = {});

/// All four tensors in one pass; bundle.scalar is the contraction value.
CurvatureBundle curvature_closed(const WarpedProductSpec& wp, const ProductPoint& pt,
                                 const ClosedFormOptions& options = {}, double* scalar_formula = nullptr);

}  // namespace warpcurv
