#pragma once

// Shared helpers for the unit and acceptance suites.

#include <cmath>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "warpcurv/expr.hpp"
#include "warpcurv/manifest.hpp"

namespace warpcurv::testing {

inline std::filesystem::path catalog_dir() { return WARPCURV_CATALOG_DIR; }
inline std::filesystem::path fixture_dir() { return WARPCURV_FIXTURE_DIR; }

inline const std::vector<std::string>& catalog_names() {
  static const std::vector<std::string> names = {"flat-product", "unit-sphere", "robertson-walker", "doubly-exp",
                                                 "schwarzschild-exterior-slice"};
  return names;
}

inline Manifest catalog(const std::string& name) { return load_manifest(catalog_dir() / (name + ".json")); }
inline Manifest fixture(const std::string& name) { return load_manifest(fixture_dir() / (name + ".json")); }

inline Eigen::VectorXd sample_in_box(const std::vector<std::pair<double, double>>& box, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::VectorXd z(static_cast<Eigen::Index>(box.size()));
  for (std::size_t i = 0; i < box.size(); ++i)
    z(static_cast<Eigen::Index>(i)) = box[i].first + u(rng) * (box[i].second - box[i].first);
  return z;
}

// Random smooth expressions over [-1, 1]^arity. Every construct is defined on
// the whole box, so evaluation never throws.
class ExpressionGenerator {
 public:
  ExpressionGenerator(std::size_t arity, std::uint64_t seed) : arity_(arity), rng_(seed) {}

  std::string operator()(int depth = 3) { return node(depth); }

 private:
  std::string leaf() {
    std::uniform_int_distribution<int> pick(0, 3);
    if (pick(rng_) == 0) {
      std::uniform_real_distribution<double> c(-2.0, 2.0);
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.3f", c(rng_));
      return std::string("(") + buf + ")";
    }
    std::uniform_int_distribution<std::size_t> var(0, arity_ - 1);
    return "x" + std::to_string(var(rng_));
  }

  std::string node(int depth) {
    if (depth == 0) return leaf();
    std::uniform_int_distribution<int> pick(0, 13);
    const auto a = [&] { return node(depth - 1); };
    switch (pick(rng_)) {
      case 0: return "(" + a() + " + " + a() + ")";
      case 1: return "(" + a() + " - " + a() + ")";
      case 2: return "(" + a() + " * " + a() + ")";
      case 3: return "(" + a() + " / (1.5 + cos(" + a() + ")))";
      case 4: return "sin(" + a() + ")";
      case 5: return "cos(" + a() + ")";
      case 6: return "exp(0.3*" + a() + ")";
      case 7: return "tanh(" + a() + ")";
      case 8: return "log(1 + (" + a() + ")^2)";
      case 9: return "sqrt(2 + sin(" + a() + "))";
      case 10: return "(" + a() + ")^2";
      case 11: return "(1.5 + sin(" + a() + "))^cos(" + a() + ")";
      case 12: return "-" + a();
      default: return "sinh(0.5*tanh(" + a() + "))";
    }
  }

  std::size_t arity_;
  std::mt19937_64 rng_;
};

// Fourth-order central differences of plain evaluation; independent of the
// dual-number machinery.
inline Eigen::VectorXd fd_gradient(const Expression& e, const Eigen::VectorXd& x, double h = 1e-3) {
  Eigen::VectorXd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    auto at = [&](double d) {
      Eigen::VectorXd y = x;
      y(i) += d;
      return evaluate(e, {y.data(), static_cast<std::size_t>(y.size())});
    };
    g(i) = (-at(2 * h) + 8 * at(h) - 8 * at(-h) + at(-2 * h)) / (12 * h);
  }
  return g;
}

inline Eigen::MatrixXd fd_hessian(const Expression& e, const Eigen::VectorXd& x, double h = 1e-3) {
  const auto n = x.size();
  Eigen::MatrixXd H(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    auto grad_at = [&](double d) {
      Eigen::VectorXd y = x;
      y(j) += d;
      return fd_gradient(e, y, h);
    };
    H.col(j) = (-grad_at(2 * h) + 8 * grad_at(h) - 8 * grad_at(-h) + grad_at(-2 * h)) / (12 * h);
  }
  return 0.5 * (H + H.transpose());
}

}  // namespace warpcurv::testing
