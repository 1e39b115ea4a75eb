#pragma once

#include <vector>

#include <Eigen/Dense>

#include "warpcurv/warped.hpp"

namespace warpcurv {

struct GeodesicState {
  double s = 0.0;
  ProductPoint position;
  Eigen::VectorXd velocity;  // base components first, then fiber
};

struct Trajectory {
  std::vector<GeodesicState> samples;
  std::vector<double> norm_history;  // <γ', γ'>_M per sample
};

enum class RhsChoice { Full, Split };

/// a^k = −Γ^k_{ij} v^i v^j with the block Christoffels of M.
Eigen::VectorXd rhs_full(const WarpedProductSpec& wp, const GeodesicState& state);

/// Leaf/fiber split form:
///   x''^ρ = −^BΓ^ρ_{μν} x'^μ x'^ν + (f/h²)⟨y',y'⟩_F g_B^{ρν}∂_ν f − 2 (d/ds ln h) x'^ρ
///   y''^γ = −^FΓ^γ_{αβ} y'^α y'^β + (h/f²)⟨x',x'⟩_B g_F^{γβ}∂_β h − 2 (d/ds ln f) y'^γ
/// Algebraically identical to rhs_full.
Eigen::VectorXd rhs_split(const WarpedProductSpec& wp, const GeodesicState& state);

/// ⟨v, v⟩ in the assembled metric at the state's position.
double velocity_norm(const WarpedProductSpec& wp, const GeodesicState& state);

struct IntegrateOptions {
  /// Abort with StepTooLarge once |N(s) − N(0)| > abort_drift · (1 + |N(0)|).
  double abort_drift = 1e-3;
};

/// Classical fixed-step RK4 on (position, velocity). Samples at s0, s0+step,
/// ..., with a final shortened step landing exactly on s_end.
Trajectory integrate(const WarpedProductSpec& wp, const GeodesicState& initial, double s_end, double step,
                     RhsChoice rhs, const IntegrateOptions& options = {});

/// max_s |N(s) − N(0)|.
double max_norm_drift(const Trajectory& t);

}  // namespace warpcurv
