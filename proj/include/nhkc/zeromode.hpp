// Closed-form lambda = 0 bulk solutions, the zero-mode existence criterion
// (general and hermitian-specialised) and the zero-mode wavefunction.
#pragma once

#include "nhkc/finite.hpp"
#include "nhkc/model.hpp"

namespace nhkc {

/// The four closed-form lambda = 0 roots x_{+-,+-} (first sign: numerator,
/// second: denominator), the two a values, and the normalised arguments
/// y1 = -m / sqrt(-4 D2), y2 = t_s / sqrt(-4 D2).
struct ZeroModeSolution {
  Complex x_mm, x_pm, x_mp, x_pp;
  Complex a_m, a_p;
  Complex y1, y2;
};

/// Throws std::domain_error when d1 = 0 (the a formulas divide by 2 d1; with
/// d1 d2 = 0 there is no finite-size zero mode and callers use the
/// closed-form spectrum instead) or when D2 = 0.
ZeroModeSolution zero_mode_roots(const ModelParams& p);

enum class ZeroModeSide { minus_branch, plus_branch, none };

struct ZeroModeVerdict {
  bool exists = false;
  ZeroModeSide side = ZeroModeSide::none;
  double lhs = 0.0;  // |Im arccos(-m / (2 sqrt(t1 t2 - d1 d2)))|
  double rhs = 0.0;  // |Im arccos((t1 + t2) / (2 sqrt(t1 t2 - d1 d2)))|
  bool boundary = false;  // |lhs - rhs| inside the gapless boundary band
};

/// exists iff lhs < rhs (strict); side is the branch whose two roots both lie
/// inside the unit circle. Throws std::domain_error at t1 t2 - d1 d2 = 0.
ZeroModeVerdict has_zero_mode(const ModelParams& p, double boundary_band = 1e-10);

/// Hermitian parametrisation t1 = t e^{i phi_t}, t2 = t e^{-i phi_t},
/// d1 = d e^{i phi_d}, d2 = d e^{-i phi_d}, m real:
/// true iff m^2 < 4 t^2 cos^2(phi_t) and d^2 > t^2 sin^2(phi_t).
bool hermitian_zero_mode_condition(double m, double t, double phi_t, double d,
                                   double phi_d);

/// The decaying zero-mode combination on the verdict's side, unit norm.
/// The left boundary equations are satisfied identically by construction.
/// Throws std::domain_error when no zero mode exists.
Vector zero_mode_state(const ModelParams& p, int L);

}  // namespace nhkc
