#pragma once

// Dense small-rank tensors and the index gymnastics shared by the closed-form
// and finite-difference curvature paths. Index layout:
//   Christoffel(k, i, j) = Γ^k_{ij}
//   Riemann(i, j, k, l)  = R^i_{jkl},  R(∂_k, ∂_l)∂_j = R^i_{jkl} ∂_i

#include <algorithm>
#include <array>
#include <cmath>

#include <Eigen/Dense>
#include <unsupported/Eigen/CXX11/Tensor>

namespace warpcurv {

template <typename Scalar>
using ChristoffelT = Eigen::Tensor<Scalar, 3>;
template <typename Scalar>
using RiemannT = Eigen::Tensor<Scalar, 4>;
template <typename Scalar>
using MatrixT = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Christoffel = ChristoffelT<double>;
using Riemann = RiemannT<double>;
using Point = Eigen::VectorXd;

/// Sign convention of the curvature operator.
///   Paper:  R(X,Y)Z = D_[X,Y] Z − [D_X, D_Y] Z
///   Common: R(X,Y)Z = [D_X, D_Y] Z − D_[X,Y] Z
/// Ricci and scalar curvature do not depend on the choice.
enum class Convention { Paper, Common };

inline double convention_sign(Convention c) { return c == Convention::Common ? 1.0 : -1.0; }

/// Christoffel, Riemann, Ricci and scalar curvature at one point.
struct CurvatureBundle {
  Christoffel christoffel;
  Riemann riemann;
  Eigen::MatrixXd ricci;
  double scalar = 0.0;
};

template <typename Scalar>
Scalar max_abs(const Eigen::Tensor<Scalar, 3>& t) {
  Eigen::Tensor<Scalar, 0> m = t.abs().maximum();
  return t.size() ? m() : Scalar(0);
}

template <typename Scalar>
Scalar max_abs(const Eigen::Tensor<Scalar, 4>& t) {
  Eigen::Tensor<Scalar, 0> m = t.abs().maximum();
  return t.size() ? m() : Scalar(0);
}

/// max(1, largest absolute component); the reference magnitude for
/// scale-relative tolerances.
template <typename Derived>
double tensor_scale(const Derived& t) {
  return std::max(1.0, static_cast<double>(max_abs(t)));
}

inline double tensor_scale(const Eigen::MatrixXd& m) {
  return std::max(1.0, m.size() ? m.cwiseAbs().maxCoeff() : 0.0);
}

/// R_{ijkl} = g_{im} R^m_{jkl}.
template <typename Scalar>
RiemannT<Scalar> lower_first(const RiemannT<Scalar>& r, const MatrixT<Scalar>& g) {
  const auto n = r.dimension(0);
  RiemannT<Scalar> low(n, n, n, n);
  low.setZero();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index m = 0; m < n; ++m) {
      const Scalar gim = g(i, m);
      if (gim == Scalar(0)) continue;
      for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index k = 0; k < n; ++k)
          for (Eigen::Index l = 0; l < n; ++l) low(i, j, k, l) += gim * r(m, j, k, l);
    }
  return low;
}

/// Ricci tensor from R^i_{jkl}; the contracted lower slot depends on the
/// convention so that both yield the same (sphere-positive) tensor.
template <typename Scalar>
MatrixT<Scalar> ricci_contraction(const RiemannT<Scalar>& r, Convention convention) {
  const auto n = r.dimension(0);
  MatrixT<Scalar> ric = MatrixT<Scalar>::Zero(n, n);
  for (Eigen::Index b = 0; b < n; ++b)
    for (Eigen::Index d = 0; d < n; ++d)
      for (Eigen::Index a = 0; a < n; ++a)
        ric(b, d) += convention == Convention::Common ? r(a, b, a, d) : r(a, b, d, a);
  return ric;
}

/// Deviations from the algebraic symmetries of a lowered Riemann tensor.
struct RiemannSymmetryDefects {
  double first_pair = 0.0;   // R_{ijkl} + R_{jikl}
  double second_pair = 0.0;  // R_{ijkl} + R_{ijlk}
  double pair_swap = 0.0;    // R_{ijkl} − R_{klij}
  double bianchi = 0.0;      // R_{ijkl} + R_{iklj} + R_{iljk}

  double worst() const { return std::max({first_pair, second_pair, pair_swap, bianchi}); }
};

template <typename Scalar>
RiemannSymmetryDefects symmetry_defects(const RiemannT<Scalar>& low) {
  RiemannSymmetryDefects d;
  const auto n = low.dimension(0);
  using std::abs;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index k = 0; k < n; ++k)
        for (Eigen::Index l = 0; l < n; ++l) {
          const Scalar v = low(i, j, k, l);
          d.first_pair = std::max<double>(d.first_pair, abs(v + low(j, i, k, l)));
          d.second_pair = std::max<double>(d.second_pair, abs(v + low(i, j, l, k)));
          d.pair_swap = std::max<double>(d.pair_swap, abs(v - low(k, l, i, j)));
          d.bianchi = std::max<double>(d.bianchi, abs(v + low(i, k, l, j) + low(i, l, j, k)));
        }
  return d;
}

}  // namespace warpcurv
