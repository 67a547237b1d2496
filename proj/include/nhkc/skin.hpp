// Per-eigenvalue skin-effect classification on the periodic curve, the
// closed-form chain polynomials for the bulk quartic, and the sufficient
// no-skin parameter conditions.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nhkc/bistritz.hpp"
#include "nhkc/model.hpp"

namespace nhkc {

struct SkinContext {
  Complex N2;      // lambda^2 - (m + t_s)^2
  Polynomial P;    // bulk quartic rescaled so P(1) = 1
  Complex lambda;
  double k;
};

/// Throws std::domain_error when N2 vanishes (lambda at a curve endpoint).
SkinContext make_skin_context(const ModelParams& p, double k, int branch_sign);

/// The four closed-form chain polynomials for the degree-4 bulk polynomial.
/// T2/T1 are absent when an earlier chain member vanishes identically (the
/// singular level is signalled instead of raising): level 4 for T3 == 0,
/// level 2 for T1 == 0.
struct TPolynomials {
  Polynomial T4, T3;
  std::optional<Polynomial> T2, T1;
  std::optional<int> singular_level_signal;
};
TPolynomials t_polynomials_complex(const SkinContext& ctx, const ModelParams& p);

/// T0 = 2 Re(T2(0)/T1(0)) T1(1) - T2(1); real by construction.
/// Throws std::domain_error when T1(0) = 0 (deeper singular level).
double t0_constant(const Polynomial& T2, const Polynomial& T1);

struct SkinVerdict {
  double k = 0.0;
  Complex lambda;
  int on_circle_count = 0;
  bool skin = false;           // true iff fewer than two roots on the circle
  bool special_point = false;  // lambda at an excluded special value; not classified
  bool crosscheck_agrees = true;  // direct root-modulus inspection concurs
  std::optional<std::string> matched_condition;
};

/// Classification of the periodic-curve point lambda_{sign}(k) by counting
/// bulk-quartic roots on the unit circle.
SkinVerdict classify_skin(const ModelParams& p, double k, int branch_sign,
                          const BistritzOptions& opt = {});

struct KInterval {
  double lo, hi;
};

struct NoSkinCondition {
  std::string label;
  bool all_k = false;
  std::vector<KInterval> k_ranges;  // used when !all_k
  std::string k_range_text;
};

/// All matching sufficient conditions for the absence of the skin effect:
/// the kappa-family conditions m = 0, t1 = t2, t1 = -t2 (any complex
/// parameters), the real-parameter negative-pairing row with its k-range,
/// and the complex phase-locked rows.
std::vector<NoSkinCondition> no_skin_conditions(const ModelParams& p);

/// Spot check for isolated no-skin points (curve self-intersections):
/// true iff at least two bulk-quartic roots at lambda have modulus one
/// within tolerance and the unit-circle counter confirms >= 2 on-circle
/// roots through a singular chain.
bool spot_check_isolated(const ModelParams& p, Complex lambda,
                         double mod_tol = 1e-6);

}  // namespace nhkc
