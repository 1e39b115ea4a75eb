#include "warpcurv/curvature_oracle.hpp"

#include <cmath>

namespace warpcurv {

void DiffPolicy::validate() const {
  if (!(base_step > 0.0) || !std::isfinite(base_step)) throw Error("diff policy: base_step must be > 0");
  if (richardson_levels < 1 || richardson_levels > 3)
    throw Error("diff policy: richardson_levels must be 1, 2 or 3");
}

namespace {

Christoffel christoffels_at_stencil(const MetricSpec& spec, const Point& x) {
  try {
    return christoffels_of(spec, x);
  } catch (const DomainError& e) {
    throw StencilDomainError(std::string("stencil point outside the expression domain: ") + e.what());
  }
}

}  // namespace

Eigen::Tensor<double, 4> christoffel_derivatives_fd(const MetricSpec& spec, const Point& pt,
                                                    const DiffPolicy& policy) {
  policy.validate();
  const auto n = static_cast<Eigen::Index>(spec.dim());
  if (pt.size() != n) throw Error("point dimension does not match the metric");
  // Validates the center itself with the ordinary DomainError.
  christoffels_of(spec, pt);

  Eigen::Tensor<double, 4> dgamma(n, n, n, n);
  const int levels = policy.richardson_levels;
  for (Eigen::Index m = 0; m < n; ++m) {
    const double h0 = policy.base_step * (policy.relative_scaling ? 1.0 + std::abs(pt(m)) : 1.0);
    // table[i] holds the current Richardson column at step h0 / 2^i.
    std::vector<Christoffel> table;
    table.reserve(static_cast<std::size_t>(levels));
    for (int i = 0; i < levels; ++i) {
      const double step = h0 / static_cast<double>(1 << i);
      Point plus = pt;
      Point minus = pt;
      plus(m) += step;
      minus(m) -= step;
      // Difference of the actually representable offsets.
      const double width = plus(m) - minus(m);
      Christoffel d = (christoffels_at_stencil(spec, plus) - christoffels_at_stencil(spec, minus)) / width;
      table.push_back(std::move(d));
    }
    for (int k = 1; k < levels; ++k) {
      const double factor = std::pow(4.0, k);
      for (int i = levels - 1; i >= k; --i)
        table[static_cast<std::size_t>(i)] =
            table[static_cast<std::size_t>(i)] +
            (table[static_cast<std::size_t>(i)] - table[static_cast<std::size_t>(i - 1)]) / (factor - 1.0);
    }
    const Christoffel& best = table.back();
    for (Eigen::Index a = 0; a < n; ++a)
      for (Eigen::Index b = 0; b < n; ++b)
        for (Eigen::Index c = 0; c < n; ++c) dgamma(a, b, c, m) = best(a, b, c);
  }
  return dgamma;
}

namespace {

Riemann riemann_from(const Christoffel& g, const Eigen::Tensor<double, 4>& dg, Convention convention) {
  const auto n = g.dimension(0);
  const double sign = convention == Convention::Paper ? 1.0 : -1.0;
  Riemann r(n, n, n, n);
  for (Eigen::Index mu = 0; mu < n; ++mu)
    for (Eigen::Index nu = 0; nu < n; ++nu)
      for (Eigen::Index la = 0; la < n; ++la)
        for (Eigen::Index rho = 0; rho < n; ++rho) {
          double v = dg(mu, la, nu, rho) - dg(mu, rho, nu, la);
          for (Eigen::Index s = 0; s < n; ++s) v += g(mu, rho, s) * g(s, la, nu) - g(mu, la, s) * g(s, rho, nu);
          r(mu, nu, la, rho) = sign * v;
        }
  return r;
}

void check_ricci_symmetry(const Eigen::MatrixXd& ric) {
  const double asym = (ric - ric.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-8 * tensor_scale(ric))
    throw NumericalInstability("finite-difference Ricci tensor asymmetric by " + std::to_string(asym));
}

}  // namespace

Riemann riemann_fd(const MetricSpec& spec, const Point& pt, const DiffPolicy& policy, Convention convention) {
  const auto dgamma = christoffel_derivatives_fd(spec, pt, policy);
  return riemann_from(christoffels_of(spec, pt), dgamma, convention);
}

Eigen::MatrixXd ricci_fd(const MetricSpec& spec, const Point& pt, const DiffPolicy& policy, Convention convention) {
  Eigen::MatrixXd ric = ricci_contraction(riemann_fd(spec, pt, policy, convention), convention);
  check_ricci_symmetry(ric);
  return ric;
}

double scalar_fd(const MetricSpec& spec, const Point& pt, const DiffPolicy& policy, Convention convention) {
  const Eigen::MatrixXd ric = ricci_fd(spec, pt, policy, convention);
  return inverse_metric_at(spec, pt).inverse.cwiseProduct(ric).sum();
}

double sectional_fd(const MetricSpec& spec, const Point& pt, const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                    const DiffPolicy& policy, Convention convention) {
  const auto n = static_cast<Eigen::Index>(spec.dim());
  if (u.size() != n || v.size() != n) throw Error("tangent vectors must match the metric dimension");
  const Eigen::MatrixXd g = metric_at(spec, pt);
  const double uu = u.dot(g * u);
  const double vv = v.dot(g * v);
  const double uv = u.dot(g * v);
  const double den = uu * vv - uv * uv;
  const double gscale = g.cwiseAbs().maxCoeff();
  const double scale = gscale * gscale * u.squaredNorm() * v.squaredNorm();
  if (!(std::abs(den) > 1e-10 * scale)) throw DegeneratePlane("tangent plane is degenerate");

  const Riemann low = lower_first<double>(riemann_fd(spec, pt, policy, convention), g);
  // Paper: <R(u,v)u, v>; Common: <R(u,v)v, u>. Equal for an exact tensor.
  double num = 0.0;
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b)
      for (Eigen::Index c = 0; c < n; ++c)
        for (Eigen::Index d = 0; d < n; ++d) {
          const double w = convention == Convention::Paper ? v(a) * u(b) : u(a) * v(b);
          num += low(a, b, c, d) * w * u(c) * v(d);
        }
  return num / den;
}

CurvatureBundle curvature_fd(const MetricSpec& spec, const Point& pt, const DiffPolicy& policy,
                             Convention convention) {
  CurvatureBundle b;
  b.christoffel = christoffels_of(spec, pt);
  b.riemann = riemann_from(b.christoffel, christoffel_derivatives_fd(spec, pt, policy), convention);
  b.ricci = ricci_contraction(b.riemann, convention);
  check_ricci_symmetry(b.ricci);
  b.scalar = inverse_metric_at(spec, pt).inverse.cwiseProduct(b.ricci).sum();
  return b;
}

// ---------------------------------------------------------------------------

namespace {

template <int Rank>
TensorDeviation deviation(std::string name, const Eigen::Tensor<double, Rank>& a,
                          const Eigen::Tensor<double, Rank>& b) {
  if (a.dimensions() != b.dimensions()) throw Error("cannot compare " + name + ": shapes differ");
  TensorDeviation d{std::move(name)};
  Eigen::Index worst = -1;
  double ref = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double diff = std::abs(a.data()[i] - b.data()[i]);
    ref = std::max(ref, std::abs(b.data()[i]));
    if (std::isnan(diff)) {
      d.max_abs = diff;
      worst = i;
      break;
    }
    if (worst < 0 || diff > d.max_abs) {
      d.max_abs = diff;
      worst = i;
    }
  }
  d.max_rel = d.max_abs / std::max(1.0, ref);
  if (worst >= 0) {
    // Column-major linear index back to a multi-index.
    Eigen::Index rest = worst;
    for (int r = 0; r < Rank; ++r) {
      d.worst_index.push_back(rest % a.dimension(r));
      rest /= a.dimension(r);
    }
  }
  return d;
}

}  // namespace

BundleReport compare_bundles(const CurvatureBundle& a, const CurvatureBundle& b) {
  BundleReport r;
  r.tensors[0] = deviation<3>("christoffel", a.christoffel, b.christoffel);
  r.tensors[1] = deviation<4>("riemann", a.riemann, b.riemann);
  using ConstMap2 = Eigen::TensorMap<const Eigen::Tensor<double, 2>>;
  const Eigen::Tensor<double, 2> ra = ConstMap2(a.ricci.data(), a.ricci.rows(), a.ricci.cols());
  const Eigen::Tensor<double, 2> rb = ConstMap2(b.ricci.data(), b.ricci.rows(), b.ricci.cols());
  r.tensors[2] = deviation<2>("ricci", ra, rb);
  Eigen::Tensor<double, 1> sa(1), sb(1);
  sa(0) = a.scalar;
  sb(0) = b.scalar;
  r.tensors[3] = deviation<1>("scalar", sa, sb);
  r.tensors[3].worst_index.clear();
  return r;
}

double BundleReport::max_rel() const {
  double m = 0.0;
  for (const auto& t : tensors) m = std::max(m, t.max_rel);
  return m;
}

double BundleReport::max_abs() const {
  double m = 0.0;
  for (const auto& t : tensors) m = std::max(m, t.max_abs);
  return m;
}

const TensorDeviation& BundleReport::worst() const {
  const TensorDeviation* w = &tensors[0];
  for (const auto& t : tensors)
    if (t.max_rel > w->max_rel) w = &t;
  return *w;
}

}  // namespace warpcurv
