#include "warpcurv/curvature_closed.hpp"

namespace warpcurv {

FactorTerms factor_terms(const MetricSpec& metric, const ScalarFieldSpec& warp, const Eigen::VectorXd& x, char which) {
  FactorTerms t;
  t.metric = metric_at(metric, x);
  t.inverse = invert_metric(t.metric).inverse;
  t.christoffel = christoffels_from(t.inverse, metric_derivatives(metric, x));
  const Jet2 jet = jet2(warp.expr, as_span(x));
  if (warp.positivity_required && !(jet.value > 0.0)) throw NonpositiveWarp(which, jet.value);
  t.warp = jet.value;
  t.warp_gradient = jet.gradient;
  t.warp_hessian = covariant_hessian(t.christoffel, jet);
  t.warp_laplacian = t.inverse.cwiseProduct(t.warp_hessian).sum();
  t.warp_gradient_norm2 = jet.gradient.dot(t.inverse * jet.gradient);
  return t;
}

namespace {

inline double delta(Eigen::Index a, Eigen::Index b) { return a == b ? 1.0 : 0.0; }

/// Factor data plus factor curvature, always in the common convention.
struct ProductTerms {
  FactorTerms base;   // warp = f
  FactorTerms fiber;  // warp = h
  Riemann base_riemann{};
  Riemann fiber_riemann{};
  Eigen::MatrixXd base_ricci{};
  Eigen::MatrixXd fiber_ricci{};
  double base_scalar = 0.0;
  double fiber_scalar = 0.0;
};

void check_point(const WarpedProductSpec& wp, const ProductPoint& pt) {
  if (pt.base.size() != static_cast<Eigen::Index>(wp.base_dim()) ||
      pt.fiber.size() != static_cast<Eigen::Index>(wp.fiber_dim()))
    throw Error("product point does not match the base/fiber dimensions");
}

ProductTerms product_terms(const WarpedProductSpec& wp, const ProductPoint& pt, const DiffPolicy& policy,
                           bool with_curvature) {
  check_point(wp, pt);
  ProductTerms t{factor_terms(wp.base(), wp.f(), pt.base, 'f'), factor_terms(wp.fiber(), wp.h(), pt.fiber, 'h')};
  if (with_curvature) {
    const CurvatureBundle b = curvature_fd(wp.base(), pt.base, policy, Convention::Common);
    const CurvatureBundle f = curvature_fd(wp.fiber(), pt.fiber, policy, Convention::Common);
    t.base_riemann = b.riemann;
    t.base_ricci = b.ricci;
    t.base_scalar = b.scalar;
    t.fiber_riemann = f.riemann;
    t.fiber_ricci = f.ricci;
    t.fiber_scalar = f.scalar;
  }
  return t;
}

Christoffel christoffels_from_terms(const ProductTerms& t) {
  const auto m = t.base.metric.rows();
  const auto n = t.fiber.metric.rows();
  const double f = t.base.warp;
  const double h = t.fiber.warp;
  const Eigen::VectorXd phi = t.base.warp_gradient / f;    // ∂ ln f
  const Eigen::VectorXd psi = t.fiber.warp_gradient / h;   // ∂ ln h
  const Eigen::VectorXd grad_f = t.base.inverse * t.base.warp_gradient;
  const Eigen::VectorXd grad_h = t.fiber.inverse * t.fiber.warp_gradient;
  const Eigen::MatrixXd& g = t.base.metric;
  const Eigen::MatrixXd& k = t.fiber.metric;

  Christoffel gamma(m + n, m + n, m + n);
  gamma.setZero();
  for (Eigen::Index c = 0; c < m; ++c)
    for (Eigen::Index a = 0; a < m; ++a)
      for (Eigen::Index b = 0; b < m; ++b) gamma(c, a, b) = t.base.christoffel(c, a, b);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index a = 0; a < m; ++a)
      for (Eigen::Index b = 0; b < m; ++b) gamma(m + i, a, b) = -(h / (f * f)) * g(a, b) * grad_h(i);
  for (Eigen::Index a = 0; a < m; ++a)
    for (Eigen::Index i = 0; i < n; ++i) {
      gamma(a, a, m + i) = psi(i);
      gamma(a, m + i, a) = psi(i);
      gamma(m + i, m + i, a) = phi(a);
      gamma(m + i, a, m + i) = phi(a);
    }
  for (Eigen::Index a = 0; a < m; ++a)
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) gamma(a, m + i, m + j) = -(f / (h * h)) * k(i, j) * grad_f(a);
  for (Eigen::Index l = 0; l < n; ++l)
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) gamma(m + l, m + i, m + j) = t.fiber.christoffel(l, i, j);
  return gamma;
}

// Indices: base a, b, c, d in [0, m); fiber i, j, k, l in [0, n), stored at m + i.
Riemann riemann_from_terms(const ProductTerms& t, Convention convention) {
  const auto m = t.base.metric.rows();
  const auto n = t.fiber.metric.rows();
  const double f = t.base.warp;
  const double h = t.fiber.warp;
  const Eigen::MatrixXd& g = t.base.metric;
  const Eigen::MatrixXd& k = t.fiber.metric;
  const Eigen::VectorXd phi = t.base.warp_gradient / f;
  const Eigen::VectorXd psi = t.fiber.warp_gradient / h;
  const Eigen::VectorXd phi_up = t.base.inverse * phi;
  const Eigen::VectorXd psi_up = t.fiber.inverse * psi;
  const Eigen::MatrixXd& hess_f = t.base.warp_hessian;
  const Eigen::MatrixXd& hess_h = t.fiber.warp_hessian;
  const Eigen::MatrixXd hess_f_up = t.base.inverse * hess_f;   // D^a ∂_b f
  const Eigen::MatrixXd hess_h_up = t.fiber.inverse * hess_h;  // D^i ∂_j h
  const double norm_f = t.base.warp_gradient_norm2;
  const double norm_h = t.fiber.warp_gradient_norm2;

  Riemann r(m + n, m + n, m + n, m + n);
  r.setZero();

  // Pure base block.
  for (Eigen::Index a = 0; a < m; ++a)
    for (Eigen::Index b = 0; b < m; ++b)
      for (Eigen::Index c = 0; c < m; ++c)
        for (Eigen::Index d = 0; d < m; ++d)
          r(a, b, c, d) = t.base_riemann(a, b, c, d) -
                          (norm_h / (f * f)) * (delta(a, c) * g(b, d) - delta(a, d) * g(b, c));

  // R^a_{bci}: partner of R^i_{abc} under pair symmetry.
  for (Eigen::Index a = 0; a < m; ++a)
    for (Eigen::Index b = 0; b < m; ++b)
      for (Eigen::Index c = 0; c < m; ++c)
        for (Eigen::Index i = 0; i < n; ++i) {
          const double v = psi(i) * (delta(a, c) * phi(b) - g(b, c) * phi_up(a));
          r(a, b, c, m + i) = v;
          r(a, b, m + i, c) = -v;
        }

  // R^a_{ibc}: log-gradient product block.
  for (Eigen::Index a = 0; a < m; ++a)
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index b = 0; b < m; ++b)
        for (Eigen::Index c = 0; c < m; ++c)
          r(a, m + i, b, c) = psi(i) * (delta(a, b) * phi(c) - delta(a, c) * phi(b));

  // R^a_{ibj}: Hessian block.
  for (Eigen::Index a = 0; a < m; ++a)
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index b = 0; b < m; ++b)
        for (Eigen::Index j = 0; j < n; ++j) {
          const double v = -(delta(a, b) / h) * hess_h(i, j) - (f / (h * h)) * k(i, j) * hess_f_up(a, b);
          r(a, m + i, b, m + j) = v;
          r(a, m + i, m + j, b) = -v;
        }

  // R^a_{ijk}.
  for (Eigen::Index a = 0; a < m; ++a)
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index l = 0; l < n; ++l)
          r(a, m + i, m + j, m + l) = (f * f / (h * h)) * phi_up(a) * (psi(j) * k(i, l) - psi(l) * k(i, j));

  // Pure fiber block.
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index p = 0; p < n; ++p)
        for (Eigen::Index l = 0; l < n; ++l)
          r(m + i, m + j, m + p, m + l) = t.fiber_riemann(i, j, p, l) -
                                          (norm_f / (h * h)) * (delta(i, p) * k(j, l) - delta(i, l) * k(j, p));

  // R^i_{jpa}: mirror of R^a_{bci}.
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index p = 0; p < n; ++p)
        for (Eigen::Index a = 0; a < m; ++a) {
          const double v = phi(a) * (delta(i, p) * psi(j) - k(j, p) * psi_up(i));
          r(m + i, m + j, m + p, a) = v;
          r(m + i, m + j, a, m + p) = -v;
        }

  // R^i_{ajp}.
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index a = 0; a < m; ++a)
      for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index p = 0; p < n; ++p)
          r(m + i, a, m + j, m + p) = phi(a) * (delta(i, j) * psi(p) - delta(i, p) * psi(j));

  // R^i_{ajb}.
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index a = 0; a < m; ++a)
      for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index b = 0; b < m; ++b) {
          const double v = -(delta(i, j) / f) * hess_f(a, b) - (h / (f * f)) * g(a, b) * hess_h_up(i, j);
          r(m + i, a, m + j, b) = v;
          r(m + i, a, b, m + j) = -v;
        }

  // R^i_{abc}.
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index a = 0; a < m; ++a)
      for (Eigen::Index b = 0; b < m; ++b)
        for (Eigen::Index c = 0; c < m; ++c)
          r(m + i, a, b, c) = (h * h / (f * f)) * psi_up(i) * (phi(b) * g(a, c) - phi(c) * g(a, b));

  if (convention == Convention::Paper) r = -r;
  return r;
}

Eigen::MatrixXd ricci_from_terms(const ProductTerms& t) {
  const auto m = t.base.metric.rows();
  const auto n = t.fiber.metric.rows();
  const double f = t.base.warp;
  const double h = t.fiber.warp;
  const auto md = static_cast<double>(m);
  const auto nd = static_cast<double>(n);

  Eigen::MatrixXd ric(m + n, m + n);
  ric.topLeftCorner(m, m) =
      t.base_ricci -
      (t.base.metric / (f * f)) * (h * t.fiber.warp_laplacian + (md - 1.0) * t.fiber.warp_gradient_norm2) -
      (nd / f) * t.base.warp_hessian;
  ric.bottomRightCorner(n, n) =
      t.fiber_ricci -
      (t.fiber.metric / (h * h)) * (f * t.base.warp_laplacian + (nd - 1.0) * t.base.warp_gradient_norm2) -
      (md / h) * t.fiber.warp_hessian;
  const Eigen::MatrixXd cross =
      (md + nd - 2.0) * (t.base.warp_gradient / f) * (t.fiber.warp_gradient / h).transpose();
  ric.topRightCorner(m, n) = cross;
  ric.bottomLeftCorner(n, m) = cross.transpose();
  return ric;
}

double scalar_formula_from_terms(const ProductTerms& t) {
  const auto md = static_cast<double>(t.base.metric.rows());
  const auto nd = static_cast<double>(t.fiber.metric.rows());
  const double f = t.base.warp;
  const double h = t.fiber.warp;
  const double f2 = f * f;
  const double h2 = h * h;
  return t.base_scalar / h2 - 2.0 * md * t.fiber.warp_laplacian / (h * f2) -
         md * (md - 1.0) * (t.fiber.warp_gradient_norm2 / h2) / f2 + t.fiber_scalar / f2 -
         2.0 * nd * t.base.warp_laplacian / (f * h2) - nd * (nd - 1.0) * (t.base.warp_gradient_norm2 / f2) / h2;
}

double contract_with_assembled(const WarpedProductSpec& wp, const ProductPoint& pt, const Eigen::MatrixXd& ric) {
  const Eigen::MatrixXd g_inv = invert_metric(assemble_metric(wp, pt)).inverse;
  return g_inv.cwiseProduct(ric).sum();
}

}  // namespace

Christoffel christoffels_closed(const WarpedProductSpec& wp, const ProductPoint& pt) {
  return christoffels_from_terms(product_terms(wp, pt, DiffPolicy{}, false));
}

Riemann riemann_closed(const WarpedProductSpec& wp, const ProductPoint& pt, const ClosedFormOptions& options) {
  return riemann_from_terms(product_terms(wp, pt, options.policy, true), options.convention);
}

Eigen::MatrixXd ricci_closed(const WarpedProductSpec& wp, const ProductPoint& pt, const ClosedFormOptions& options) {
  return ricci_from_terms(product_terms(wp, pt, options.policy, true));
}

ScalarCurvature scalar_closed(const WarpedProductSpec& wp, const ProductPoint& pt, const ClosedFormOptions& options) {
  const ProductTerms t = product_terms(wp, pt, options.policy, true);
  return {contract_with_assembled(wp, pt, ricci_from_terms(t)), scalar_formula_from_terms(t)};
}

CurvatureBundle curvature_closed(const WarpedProductSpec& wp, const ProductPoint& pt, const ClosedFormOptions& options,
                                 double* scalar_formula) {
  const ProductTerms t = product_terms(wp, pt, options.policy, true);
  CurvatureBundle b;
  b.christoffel = christoffels_from_terms(t);
  b.riemann = riemann_from_terms(t, options.convention);
  b.ricci = ricci_from_terms(t);
  b.scalar = contract_with_assembled(wp, pt, b.ricci);
  if (scalar_formula) *scalar_formula = scalar_formula_from_terms(t);
  return b;
}

}  // namespace warpcurv
