#include <doctest.h>

#include <cmath>
#include <numbers>

#include "support.hpp"
#include "warpcurv/geodesics.hpp"

using namespace warpcurv;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd p(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double c : v) p(i++) = c;
  return p;
}

GeodesicState state(const Manifest& m, std::initializer_list<double> x, std::initializer_list<double> v) {
  return {0.0, ProductPoint::split(vec(x), m.spec.base_dim()), vec(v)};
}

}  // namespace

TEST_CASE("rhs examples") {
  const Manifest flat = testing::catalog("flat-product");
  CHECK(rhs_full(flat.spec, state(flat, {0.2, 0.1}, {1.0, -2.0})).isZero(0));
  CHECK(rhs_split(flat.spec, state(flat, {0.2, 0.1}, {1.0, -2.0})).isZero(0));

  const Manifest sphere = testing::catalog("unit-sphere");
  const GeodesicState eq = state(sphere, {std::numbers::pi / 2, 0.3}, {0, 1});
  CHECK(rhs_full(sphere.spec, eq).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK(rhs_split(sphere.spec, eq).cwiseAbs().maxCoeff() <= 1e-15);

  // Γ^t_tt = 0, Γ^t_ty = 1, Γ^t_yy = -1 and Γ^y_tt = -1, Γ^y_ty = 1, Γ^y_yy = 0.
  const Manifest dexp = testing::catalog("doubly-exp");
  const GeodesicState o = state(dexp, {0, 0}, {1, 1});
  const Eigen::VectorXd a = rhs_full(dexp.spec, o);
  CHECK(a(0) == doctest::Approx(-(2 * 1 - 1)));
  CHECK(a(1) == doctest::Approx(-(-1 + 2 * 1)));
  CHECK((rhs_split(dexp.spec, o) - a).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("split and full right-hand sides agree") {
  for (const char* name : {"doubly-warped-2x2"}) {
    const Manifest m = testing::fixture(name);
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int t = 0; t < 100; ++t) {
      const GeodesicState st{0.0, ProductPoint::split(testing::sample_in_box(m.sample_box, rng), 2),
                             Eigen::VectorXd::NullaryExpr(4, [&] { return u(rng); })};
      const Eigen::VectorXd a = rhs_full(m.spec, st);
      const Eigen::VectorXd b = rhs_split(m.spec, st);
      CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, a.cwiseAbs().maxCoeff()));
    }
  }
}

TEST_CASE("straight lines in the flat product") {
  const Manifest flat = testing::catalog("flat-product");
  const Trajectory t = integrate(flat.spec, state(flat, {0, 0}, {1, 0}), 1.0, 1e-3, RhsChoice::Full);
  const GeodesicState& end = t.samples.back();
  CHECK(end.s == 1.0);
  CHECK(std::abs(end.position.base(0) - 1.0) <= 1e-12);
  CHECK(end.position.fiber(0) == 0.0);
  CHECK(max_norm_drift(t) == 0.0);
  CHECK(t.samples.size() == t.norm_history.size());
}

TEST_CASE("the last step lands on s_end") {
  const Manifest flat = testing::catalog("flat-product");
  const Trajectory t = integrate(flat.spec, state(flat, {0, 0}, {1, 0.5}), 1.0, 0.3, RhsChoice::Full);
  REQUIRE(t.samples.size() == 5);
  CHECK(t.samples[3].s == doctest::Approx(0.9));
  CHECK(t.samples.back().s == 1.0);
  CHECK(std::abs(t.samples.back().position.fiber(0) - 0.5) <= 1e-14);
}

TEST_CASE("sphere equator closes") {
  const Manifest sphere = testing::catalog("unit-sphere");
  const double two_pi = 2 * std::numbers::pi;
  const Trajectory t =
      integrate(sphere.spec, state(sphere, {std::numbers::pi / 2, 0}, {0, 1}), two_pi, 1e-3, RhsChoice::Full);
  const auto& end = t.samples.back();
  CHECK(std::abs(end.position.base(0) - std::numbers::pi / 2) <= 1e-6);
  CHECK(std::abs(end.position.fiber(0) - two_pi) <= 1e-6);
  CHECK(max_norm_drift(t) <= 1e-8);
}

TEST_CASE("affine reparameterisation") {
  const Manifest m = testing::fixture("doubly-warped-2x2");
  const GeodesicState a = state(m, {1.2, 0.3, 0.2, -0.1}, {0.4, 0.3, -0.2, 0.5});
  GeodesicState b = a;
  b.velocity *= 2.0;
  const Trajectory ta = integrate(m.spec, a, 1.0, 1e-3, RhsChoice::Full);
  const Trajectory tb = integrate(m.spec, b, 0.5, 5e-4, RhsChoice::Full);
  CHECK((ta.samples.back().position.concat() - tb.samples.back().position.concat()).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("norm conservation on the catalog") {
  struct Case {
    const char* name;
    std::vector<double> x, v;
  };
  const std::vector<Case> cases = {
      {"flat-product", {0, 0}, {1, 0.3}},
      {"unit-sphere", {1.2, 0}, {0.5, 1}},
      {"robertson-walker", {0, 1, 1.2, 0.3}, {1.2, 0.1, 0.1, 0.05}},
      {"doubly-exp", {0, 0}, {0.3, 0.2}},
      {"schwarzschild-exterior-slice", {0, 6, 1.2, 0.3}, {1.1, 0.1, 0.05, 0.1}},
  };
  for (const auto& c : cases) {
    const Manifest m = testing::catalog(c.name);
    const Eigen::Map<const Eigen::VectorXd> x(c.x.data(), static_cast<Eigen::Index>(c.x.size()));
    const Eigen::Map<const Eigen::VectorXd> v(c.v.data(), static_cast<Eigen::Index>(c.v.size()));
    const GeodesicState s0{0.0, ProductPoint::split(x, m.spec.base_dim()), v};
    const Trajectory t = integrate(m.spec, s0, 10.0, 1e-3, RhsChoice::Full);
    INFO(c.name);
    CHECK(max_norm_drift(t) <= 1e-8 * (1 + std::abs(t.norm_history.front())));
  }
}

TEST_CASE("RK4 convergence on the sphere") {
  // Error at s = 1 against a step/4 reference halves the step each time.
  const Manifest sphere = testing::catalog("unit-sphere");
  const GeodesicState s0 = state(sphere, {1.0, 0.0}, {0.6, 0.9});
  auto end = [&](double h) {
    return integrate(sphere.spec, s0, 1.0, h, RhsChoice::Full).samples.back().position.concat();
  };
  const double h = 0.04;
  const Eigen::VectorXd ref = end(h / 4);
  const double e1 = (end(h) - ref).norm();
  const double e2 = (end(h / 2) - ref).norm();
  CHECK(e1 / e2 >= 12.0);
}

TEST_CASE("integration failures") {
  const Manifest sphere = testing::catalog("unit-sphere");
  CHECK_THROWS_AS(integrate(sphere.spec, state(sphere, {1.2, 0}, {0.5, 1}), 10.0, 0.9, RhsChoice::Full),
                  StepTooLarge);

  const Manifest esc = testing::fixture("geodesic-escape");
  try {
    integrate(esc.spec, state(esc, {1, 0}, {-1, 0}), 2.0, 1e-3, RhsChoice::Split);
    FAIL("expected DomainExit");
  } catch (const DomainExit& e) {
    CHECK(e.s() < 1.0);
    CHECK(e.s() > 0.99);
    REQUIRE(e.position().size() == 2);
    CHECK(e.position()[0] > 0.0);
  }
  CHECK_THROWS_AS(integrate(sphere.spec, state(sphere, {1.2, 0}, {0.5, 1}), 1.0, -1e-3, RhsChoice::Full), Error);
  CHECK_THROWS_AS(integrate(sphere.spec, state(sphere, {1.2, 0}, {0.5, 1, 3}), 1.0, 1e-3, RhsChoice::Full), Error);
}
