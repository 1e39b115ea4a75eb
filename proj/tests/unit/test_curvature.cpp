#include <doctest.h>

#include <cmath>
#include <numbers>

#include "support.hpp"
#include "warpcurv/curvature_closed.hpp"
#include "warpcurv/curvature_oracle.hpp"

using namespace warpcurv;

namespace {

MetricSpec diag_spec(std::vector<std::string> entries) {
  const std::size_t n = entries.size();
  std::vector<Expression> d;
  for (const auto& s : entries) d.push_back(parse_expression(s, n));
  return MetricSpec::diagonal("test", std::move(d));
}

Point pt(std::initializer_list<double> v) {
  Point p(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double c : v) p(i++) = c;
  return p;
}

ProductPoint split(const Manifest& m, std::initializer_list<double> v) {
  return ProductPoint::split(pt(v), m.spec.base_dim());
}

const MetricSpec& sphere2() {
  static const MetricSpec s = diag_spec({"1", "sin(x0)^2"});
  return s;
}

}  // namespace

// ---------------------------------------------------------------------------
// Oracle

TEST_CASE("oracle: flat metrics") {
  const auto e3 = MetricSpec::identity("e", 3);
  CHECK(max_abs(riemann_fd(e3, pt({0.1, 2, -3}))) == 0.0);
  CHECK(ricci_fd(e3, pt({0.1, 2, -3})).isZero(0));
  CHECK(scalar_fd(e3, pt({0.1, 2, -3})) == 0.0);
  Eigen::VectorXd u(3), v(3);
  u << 1, 0, 0;
  v << 0.3, 1, 0;
  CHECK(sectional_fd(e3, pt({0, 0, 0}), u, v) == 0.0);
}

TEST_CASE("oracle: unit sphere") {
  const Point q = pt({std::numbers::pi / 4, 0.2});
  const Riemann r = riemann_fd(sphere2(), q);
  const Riemann low = lower_first<double>(r, metric_at(sphere2(), q));
  CHECK(std::abs(low(0, 1, 0, 1)) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(std::abs(low(1, 0, 1, 0)) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(std::abs(low(0, 0, 0, 1)) <= 1e-12);

  const Eigen::MatrixXd ric = ricci_fd(sphere2(), pt({std::numbers::pi / 3, 0}));
  CHECK(ric(0, 0) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(ric(1, 1) == doctest::Approx(0.75).epsilon(1e-9));
  CHECK(std::abs(ric(0, 1)) <= 1e-12);
  const Eigen::MatrixXd ric_common = ricci_fd(sphere2(), pt({std::numbers::pi / 3, 0}), {}, Convention::Common);
  CHECK((ric - ric_common).cwiseAbs().maxCoeff() <= 1e-12);

  CHECK(std::abs(scalar_fd(sphere2(), q) - 2.0) <= 1e-6);
  CHECK(std::abs(scalar_fd(diag_spec({"4", "4*sin(x0)^2"}), q) - 0.5) <= 1e-6);

  Eigen::VectorXd u(2), v(2);
  u << 1, 0;
  v << 0, 1;
  for (Convention c : {Convention::Paper, Convention::Common})
    CHECK(std::abs(sectional_fd(sphere2(), q, u, v, {}, c) - 1.0) <= 1e-6);
  CHECK_THROWS_AS(sectional_fd(sphere2(), q, u, u), DegeneratePlane);
  CHECK_THROWS_AS(sectional_fd(sphere2(), q, u, 3.0 * u), DegeneratePlane);
}

TEST_CASE("oracle: convention flag negates Riemann exactly") {
  const Manifest m = testing::fixture("doubly-warped-2x2");
  const MetricSpec plain = as_plain_metric(m.spec);
  const Point z = pt({1.1, 0.2, -0.3, 0.5});
  const Riemann a = riemann_fd(plain, z, {}, Convention::Paper);
  const Riemann b = riemann_fd(plain, z, {}, Convention::Common);
  Eigen::Tensor<double, 0> s = (a + b).abs().maximum();
  CHECK(s() == 0.0);
}

TEST_CASE("oracle: sectional curvature is a plane invariant") {
  const Manifest m = testing::fixture("doubly-warped-2x2");
  const MetricSpec plain = as_plain_metric(m.spec);
  const Point z = pt({1.1, 0.2, -0.3, 0.5});
  Eigen::VectorXd u(4), v(4);
  u << 0.3, 1.0, -0.2, 0.4;
  v << -0.5, 0.1, 0.9, 0.2;
  const double k = sectional_fd(plain, z, u, v);
  CHECK(sectional_fd(plain, z, 2.0 * u, v) == doctest::Approx(k).epsilon(1e-9));
  CHECK(sectional_fd(plain, z, u + v, v) == doctest::Approx(k).epsilon(1e-9));
  CHECK(sectional_fd(plain, z, v, u) == doctest::Approx(k).epsilon(1e-9));
}

TEST_CASE("oracle: stencil domain errors") {
  // sqrt(x0) is fine at the centre, but the stencil reaches x0 < 0.
  const MetricSpec g = diag_spec({"1", "1 + sqrt(x0)"});
  CHECK_NOTHROW(christoffels_of(g, pt({1e-6, 0})));
  CHECK_THROWS_AS(riemann_fd(g, pt({1e-6, 0})), StencilDomainError);
  CHECK_THROWS_AS(riemann_fd(g, pt({-1, 0})), DomainError);
}

TEST_CASE("oracle: policy validation") {
  DiffPolicy p;
  p.base_step = -1;
  CHECK_THROWS(p.validate());
  p = DiffPolicy{};
  p.richardson_levels = 0;
  CHECK_THROWS(p.validate());
}

TEST_CASE("compare_bundles") {
  const Point q = pt({1.0, 0.5});
  const CurvatureBundle a = curvature_fd(sphere2(), q);
  const BundleReport same = compare_bundles(a, a);
  CHECK(same.max_abs() == 0.0);
  CHECK(same.max_rel() == 0.0);

  CurvatureBundle b = a;
  b.riemann(1, 0, 1, 0) += 1e-3;
  const BundleReport r = compare_bundles(b, a);
  CHECK(r.worst().tensor == "riemann");
  CHECK(r.worst().max_abs == doctest::Approx(1e-3).epsilon(1e-9));
  CHECK(r.worst().worst_index == std::vector<Eigen::Index>{1, 0, 1, 0});
  CHECK(r.tensors[0].max_abs == 0.0);
}

TEST_CASE("Richardson extrapolation helps on every catalog manifold") {
  for (const auto& name : testing::catalog_names()) {
    const Manifest m = testing::catalog(name);
    std::mt19937_64 rng(2);
    const Point z = testing::sample_in_box(m.sample_box, rng);
    const CurvatureBundle closed = curvature_closed(m.spec, ProductPoint::split(z, m.spec.base_dim()));
    DiffPolicy one;
    one.richardson_levels = 1;
    const double e1 = compare_bundles(closed, curvature_fd(as_plain_metric(m.spec), z, one)).max_abs();
    const double e2 = compare_bundles(closed, curvature_fd(as_plain_metric(m.spec), z)).max_abs();
    INFO(name);
    CHECK(e2 <= std::max(e1, 1e-10));
  }
}

// ---------------------------------------------------------------------------
// Closed form

TEST_CASE("closed: Christoffel examples") {
  const Manifest sphere = testing::catalog("unit-sphere");
  const Christoffel g = christoffels_closed(sphere.spec, split(sphere, {std::numbers::pi / 4, 0.3}));
  CHECK(g(0, 1, 1) == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(g(1, 0, 1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(g(1, 1, 0) == g(1, 0, 1));

  const Manifest dexp = testing::catalog("doubly-exp");
  const Christoffel d = christoffels_closed(dexp.spec, split(dexp, {0, 0}));
  CHECK(d(1, 0, 0) == -1.0);
  CHECK(d(0, 0, 1) == 1.0);
  CHECK(d(1, 1, 0) == 1.0);
  CHECK(d(0, 1, 1) == -1.0);

  const Manifest prod = testing::fixture("sphere-x-sphere");
  const Christoffel p = christoffels_closed(prod.spec, split(prod, {1.0, 0.4, 2.0, 0.1}));
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        if ((k < 2) != (i < 2) || (k < 2) != (j < 2)) CHECK(p(k, i, j) == 0.0);
}

TEST_CASE("closed: flat and product manifolds") {
  const Manifest flat = testing::catalog("flat-product");
  const ProductPoint q = split(flat, {0.3, -0.1});
  CHECK(max_abs(riemann_closed(flat.spec, q)) == 0.0);
  CHECK(ricci_closed(flat.spec, q).isZero(0));
  CHECK(scalar_closed(flat.spec, q).contraction == 0.0);
  CHECK(scalar_closed(flat.spec, q).formula == 0.0);
}

TEST_CASE("closed: unit sphere") {
  const Manifest sphere = testing::catalog("unit-sphere");
  const ProductPoint q = split(sphere, {std::numbers::pi / 2, 1.0});
  const Riemann low = lower_first<double>(riemann_closed(sphere.spec, q), assemble_metric(sphere.spec, q));
  CHECK(std::abs(low(0, 1, 0, 1)) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(scalar_closed(sphere.spec, q).contraction - 2.0) <= 1e-8);
}

TEST_CASE("closed: Robertson-Walker time-time Ricci") {
  const Manifest rw = testing::catalog("robertson-walker");
  const Eigen::MatrixXd ric = ricci_closed(rw.spec, split(rw, {0.0, 1.0, 1.2, 0.4}));
  // Ric_tt = -3 a''/a for a(t) = e^t.
  CHECK(ric(0, 0) == doctest::Approx(-3.0).epsilon(1e-8));
  const Eigen::MatrixXd oracle = ricci_fd(as_plain_metric(rw.spec), pt({0.0, 1.0, 1.2, 0.4}));
  CHECK(oracle(0, 0) == doctest::Approx(-3.0).epsilon(1e-6));
}

TEST_CASE("closed: doubly-exp at the origin") {
  const Manifest dexp = testing::catalog("doubly-exp");
  const ProductPoint q = split(dexp, {0, 0});
  const Eigen::MatrixXd ric = ricci_closed(dexp.spec, q);
  CHECK(std::abs(ric(0, 1)) <= 1e-12);
  const double oracle = scalar_fd(as_plain_metric(dexp.spec), q.concat());
  CHECK(std::abs(scalar_closed(dexp.spec, q).contraction - oracle) <= 1e-6);

  const Riemann closed = riemann_closed(dexp.spec, q);
  const Riemann fd = riemann_fd(as_plain_metric(dexp.spec), q.concat());
  Eigen::Tensor<double, 0> dev = (closed - fd).abs().maximum();
  CHECK(dev() <= 1e-6);
}

TEST_CASE("closed: matches the oracle on the fixtures") {
  for (const char* name : {"doubly-warped-2x2", "sphere-x-sphere"}) {
    const Manifest m = testing::fixture(name);
    std::mt19937_64 rng(8);
    for (Convention c : {Convention::Paper, Convention::Common})
      for (int t = 0; t < 20; ++t) {
        const Point z = testing::sample_in_box(m.sample_box, rng);
        const CurvatureBundle closed = curvature_closed(m.spec, ProductPoint::split(z, 2), {{}, c});
        const CurvatureBundle fd = curvature_fd(as_plain_metric(m.spec), z, {}, c);
        INFO(name);
        CHECK(compare_bundles(closed, fd).max_rel() <= 1e-6);
      }
  }
}

TEST_CASE("closed: nonpositive warp") {
  const Manifest m = testing::fixture("nonpositive-warp");
  CHECK_THROWS_AS(christoffels_closed(m.spec, split(m, {1, 0})), NonpositiveWarp);
  CHECK_THROWS_AS(curvature_closed(m.spec, split(m, {1, 0})), NonpositiveWarp);
  CHECK_NOTHROW(curvature_closed(m.spec, split(m, {6, 0})));
}

TEST_CASE("closed: homothety of the whole metric") {
  // f -> c f and h -> c h scale g_M by c^2: R^i_jkl and Ric are unchanged,
  // the scalar curvature divides by c^2.
  const Manifest m = testing::fixture("doubly-warped-2x2");
  const double c = 1.7;
  const WarpedProductSpec scaled(m.spec.base(), m.spec.fiber(), Expression::constant(c, 2) * m.spec.f().expr,
                                 Expression::constant(c, 2) * m.spec.h().expr);
  const ProductPoint q = ProductPoint::split(pt({1.3, -0.2, 0.4, 0.1}), 2);
  const CurvatureBundle a = curvature_closed(m.spec, q);
  const CurvatureBundle b = curvature_closed(scaled, q);
  Eigen::Tensor<double, 0> dr = (a.riemann - b.riemann).abs().maximum();
  CHECK(dr() <= 1e-9 * tensor_scale(a.riemann));
  CHECK((a.ricci - b.ricci).cwiseAbs().maxCoeff() <= 1e-9 * tensor_scale(a.ricci));
  CHECK(b.scalar == doctest::Approx(a.scalar / (c * c)).epsilon(1e-9));
}
