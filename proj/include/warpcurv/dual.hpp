#pragma once

// Forward-mode dual numbers. Nesting Dual<Dual<double>> carries one mixed
// second derivative per evaluation pass.

#include <cmath>
#include <type_traits>

namespace warpcurv {

template <typename T>
struct Dual {
  T v{};  // value
  T d{};  // directional derivative

  constexpr Dual() = default;
  constexpr Dual(double value) : v(value), d(0.0) {}  // NOLINT: implicit lift of constants
  constexpr Dual(T value, T deriv) : v(value), d(deriv) {}
};

template <typename T>
struct is_dual : std::false_type {};
template <typename T>
struct is_dual<Dual<T>> : std::true_type {};
template <typename T>
inline constexpr bool is_dual_v = is_dual<T>::value;

/// Innermost real value of a (possibly nested) dual.
inline double primal(double x) { return x; }
template <typename T>
double primal(const Dual<T>& x) {
  return primal(x.v);
}

template <typename T>
Dual<T> operator-(const Dual<T>& a) {
  return {-a.v, -a.d};
}
template <typename T>
Dual<T> operator+(const Dual<T>& a, const Dual<T>& b) {
  return {a.v + b.v, a.d + b.d};
}
template <typename T>
Dual<T> operator-(const Dual<T>& a, const Dual<T>& b) {
  return {a.v - b.v, a.d - b.d};
}
template <typename T>
Dual<T> operator*(const Dual<T>& a, const Dual<T>& b) {
  return {a.v * b.v, a.d * b.v + a.v * b.d};
}
template <typename T>
Dual<T> operator/(const Dual<T>& a, const Dual<T>& b) {
  T q = a.v / b.v;
  return {q, (a.d - q * b.d) / b.v};
}
template <typename T>
Dual<T> operator*(double s, const Dual<T>& a) {
  return {s * a.v, s * a.d};
}

// Elementary functions. Plain double overloads come from <cmath>; these are
// found by ADL for Dual arguments and recurse through nesting levels.

template <typename T>
Dual<T> sin(const Dual<T>& a) {
  using std::cos, std::sin;
  return {sin(a.v), cos(a.v) * a.d};
}
template <typename T>
Dual<T> cos(const Dual<T>& a) {
  using std::cos, std::sin;
  return {cos(a.v), -(sin(a.v) * a.d)};
}
template <typename T>
Dual<T> tan(const Dual<T>& a) {
  using std::cos, std::tan;
  T c = cos(a.v);
  return {tan(a.v), a.d / (c * c)};
}
template <typename T>
Dual<T> exp(const Dual<T>& a) {
  using std::exp;
  T e = exp(a.v);
  return {e, e * a.d};
}
template <typename T>
Dual<T> log(const Dual<T>& a) {
  using std::log;
  return {log(a.v), a.d / a.v};
}
template <typename T>
Dual<T> sqrt(const Dual<T>& a) {
  using std::sqrt;
  T r = sqrt(a.v);
  return {r, a.d / (2.0 * r)};
}
template <typename T>
Dual<T> sinh(const Dual<T>& a) {
  using std::cosh, std::sinh;
  return {sinh(a.v), cosh(a.v) * a.d};
}
template <typename T>
Dual<T> cosh(const Dual<T>& a) {
  using std::cosh, std::sinh;
  return {cosh(a.v), sinh(a.v) * a.d};
}
template <typename T>
Dual<T> tanh(const Dual<T>& a) {
  using std::tanh;
  T t = tanh(a.v);
  return {t, (1.0 - t * t) * a.d};
}

/// a^c for a real constant exponent.
inline double pow_const(double a, double c) { return std::pow(a, c); }
template <typename T>
Dual<T> pow_const(const Dual<T>& a, double c) {
  if (c == 0.0) return Dual<T>(1.0);
  return {pow_const(a.v, c), c * pow_const(a.v, c - 1.0) * a.d};
}

// Mixed arithmetic with plain doubles.
template <typename T>
Dual<T> operator+(const Dual<T>& a, double b) {
  return {a.v + b, a.d};
}
template <typename T>
Dual<T> operator-(double a, const Dual<T>& b) {
  return {a - b.v, -b.d};
}

}  // namespace warpcurv
