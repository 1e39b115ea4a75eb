#include "warpcurv/geodesics.hpp"

#include <cmath>

#include "warpcurv/curvature_closed.hpp"

namespace warpcurv {

namespace {

void check_state(const WarpedProductSpec& wp, const GeodesicState& state) {
  if (state.position.base.size() != static_cast<Eigen::Index>(wp.base_dim()) ||
      state.position.fiber.size() != static_cast<Eigen::Index>(wp.fiber_dim()) ||
      state.velocity.size() != static_cast<Eigen::Index>(wp.dim()))
    throw Error("geodesic state does not match the manifold dimensions");
}

}  // namespace

Eigen::VectorXd rhs_full(const WarpedProductSpec& wp, const GeodesicState& state) {
  check_state(wp, state);
  const Christoffel gamma = christoffels_closed(wp, state.position);
  const auto dim = state.velocity.size();
  const Eigen::VectorXd& v = state.velocity;
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < dim; ++i)
      for (Eigen::Index j = 0; j < dim; ++j) sum += gamma(k, i, j) * v(i) * v(j);
    acc(k) = -sum;
  }
  return acc;
}

Eigen::VectorXd rhs_split(const WarpedProductSpec& wp, const GeodesicState& state) {
  check_state(wp, state);
  const auto m = static_cast<Eigen::Index>(wp.base_dim());
  const auto n = static_cast<Eigen::Index>(wp.fiber_dim());
  const Eigen::VectorXd& x = state.position.base;
  const Eigen::VectorXd& y = state.position.fiber;
  const Eigen::VectorXd dx = state.velocity.head(m);
  const Eigen::VectorXd dy = state.velocity.tail(n);

  const double f = warp_f_at(wp, x);
  const double h = warp_h_at(wp, y);
  const Eigen::VectorXd df = gradient(wp.f().expr, as_span(x));
  const Eigen::VectorXd dh = gradient(wp.h().expr, as_span(y));

  const Eigen::MatrixXd gb = metric_at(wp.base(), x);
  const Eigen::MatrixXd gf = metric_at(wp.fiber(), y);
  const Eigen::MatrixXd gb_inv = invert_metric(gb).inverse;
  const Eigen::MatrixXd gf_inv = invert_metric(gf).inverse;
  const Christoffel gamma_b = christoffels_from(gb_inv, metric_derivatives(wp.base(), x));
  const Christoffel gamma_f = christoffels_from(gf_inv, metric_derivatives(wp.fiber(), y));

  const double dlnf = df.dot(dx) / f;  // d/ds ln f(α(s))
  const double dlnh = dh.dot(dy) / h;  // d/ds ln h(β(s))
  const double base_speed2 = dx.dot(gb * dx);
  const double fiber_speed2 = dy.dot(gf * dy);

  Eigen::VectorXd acc(m + n);
  const Eigen::VectorXd grad_f = gb_inv * df;
  for (Eigen::Index r = 0; r < m; ++r) {
    double geo = 0.0;
    for (Eigen::Index a = 0; a < m; ++a)
      for (Eigen::Index b = 0; b < m; ++b) geo += gamma_b(r, a, b) * dx(a) * dx(b);
    acc(r) = -geo + (f / (h * h)) * fiber_speed2 * grad_f(r) - 2.0 * dlnh * dx(r);
  }
  const Eigen::VectorXd grad_h = gf_inv * dh;
  for (Eigen::Index c = 0; c < n; ++c) {
    double geo = 0.0;
    for (Eigen::Index a = 0; a < n; ++a)
      for (Eigen::Index b = 0; b < n; ++b) geo += gamma_f(c, a, b) * dy(a) * dy(b);
    acc(m + c) = -geo + (h / (f * f)) * base_speed2 * grad_h(c) - 2.0 * dlnf * dy(c);
  }
  return acc;
}

double velocity_norm(const WarpedProductSpec& wp, const GeodesicState& state) {
  check_state(wp, state);
  const Eigen::MatrixXd g = assemble_metric(wp, state.position);
  return state.velocity.dot(g * state.velocity);
}

namespace {

// First-order system z = (position, velocity).
struct System {
  const WarpedProductSpec& wp;
  RhsChoice choice;

  Eigen::VectorXd operator()(double s, const Eigen::VectorXd& z) const {
    const auto dim = static_cast<Eigen::Index>(wp.dim());
    GeodesicState st{s, ProductPoint::split(z.head(dim), wp.base_dim()), z.tail(dim)};
    Eigen::VectorXd dz(2 * dim);
    dz.head(dim) = st.velocity;
    dz.tail(dim) = choice == RhsChoice::Full ? rhs_full(wp, st) : rhs_split(wp, st);
    return dz;
  }
};

}  // namespace

Trajectory integrate(const WarpedProductSpec& wp, const GeodesicState& initial, double s_end, double step,
                     RhsChoice rhs, const IntegrateOptions& options) {
  check_state(wp, initial);
  if (!(step > 0.0)) throw Error("integration step must be positive");
  if (!(s_end > initial.s)) throw Error("s_end must exceed the initial parameter");

  const auto dim = static_cast<Eigen::Index>(wp.dim());
  const System f{wp, rhs};
  Trajectory traj;

  Eigen::VectorXd z(2 * dim);
  z << initial.position.concat(), initial.velocity;
  double s = initial.s;
  const double norm0 = velocity_norm(wp, initial);
  traj.samples.push_back(initial);
  traj.norm_history.push_back(norm0);

  const double span = s_end - initial.s;
  const auto full_steps = static_cast<long long>(std::floor(span / step * (1.0 + 1e-12)));
  long long index = 0;
  while (s < s_end) {
    ++index;
    double next = initial.s + static_cast<double>(index) * step;
    if (index > full_steps || next > s_end) next = s_end;
    const double dt = next - s;
    if (!(dt > 0.0)) break;

    Eigen::VectorXd z_next;
    GeodesicState state;
    double norm = 0.0;
    try {
      const Eigen::VectorXd k1 = f(s, z);
      const Eigen::VectorXd k2 = f(s + 0.5 * dt, z + 0.5 * dt * k1);
      const Eigen::VectorXd k3 = f(s + 0.5 * dt, z + 0.5 * dt * k2);
      const Eigen::VectorXd k4 = f(next, z + dt * k3);
      z_next = z + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      if (!z_next.allFinite()) throw DomainError("state", "non-finite geodesic state");
      state = GeodesicState{next, ProductPoint::split(z_next.head(dim), wp.base_dim()), z_next.tail(dim)};
      norm = velocity_norm(wp, state);
    } catch (const DomainError& e) {
      throw DomainExit(s, std::vector<double>(z.data(), z.data() + dim), e.what());
    } catch (const NonpositiveWarp& e) {
      throw DomainExit(s, std::vector<double>(z.data(), z.data() + dim), e.what());
    } catch (const DegenerateMetric& e) {
      throw DomainExit(s, std::vector<double>(z.data(), z.data() + dim), e.what());
    }

    const double drift = std::abs(norm - norm0);
    if (drift > options.abort_drift * (1.0 + std::abs(norm0))) throw StepTooLarge(next, drift);

    z = std::move(z_next);
    s = next;
    traj.samples.push_back(std::move(state));
    traj.norm_history.push_back(norm);
  }
  return traj;
}

double max_norm_drift(const Trajectory& t) {
  double drift = 0.0;
  for (double n : t.norm_history) drift = std::max(drift, std::abs(n - t.norm_history.front()));
  return drift;
}

}  // namespace warpcurv
