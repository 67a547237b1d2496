// Infinite-size eigenvalue curves: per-angle solution of the root-quartet
// constraint system and three-way branch classification.
#pragma once

#include <vector>

#include "nhkc/model.hpp"

namespace nhkc {

enum class Branch {
  physical,          // |x1| >= |x2| = |x3| >= |x4|: actual eigenvalues
  pair_dominant,     // equal-modulus pair largest
  pair_subdominant,  // equal-modulus pair smallest
  ambiguous,         // triple-modulus degeneracy at a branch junction
  not_on_curve,      // no equal-modulus pair within tolerance
};

const char* branch_name(Branch b);

struct SpectrumPoint {
  double alpha;    // in [0, 2 pi)
  Complex lambda;
  Complex kappa;   // x2 = kappa e^{i alpha}, x3 = kappa e^{-i alpha}
  Complex s;       // x1 = s / kappa, x4 = 1 / (s kappa); normalised |s| >= 1
  Branch branch;
};

/// All validated solutions (lambda, kappa, s) at this angle. Candidates come
/// from eliminating the constraint system down to a quartic in kappa + 1/kappa
/// (with the documented special-case families when the elimination collapses);
/// every candidate is validated by reconstructing the root quartet from the
/// bulk quartic, so spurious elimination roots are filtered out.
/// Throws std::domain_error when D2 = 0.
std::vector<SpectrumPoint> vieta_solutions(const ModelParams& p, double alpha,
                                           double mod_tol = 1e-6);

struct SpectrumCurve {
  std::vector<SpectrumPoint> points;  // ordered by alpha
  int alpha_grid_size = 0;
  int failed_alphas = 0;  // per-angle failures recorded as gaps
};

/// Sweep of vieta_solutions over an n_alpha-point grid on [0, 2 pi).
SpectrumCurve spectrum_curve(const ModelParams& p, int n_alpha,
                             double mod_tol = 1e-6);

/// Classification by the modulus ordering of the quartet; `ambiguous` marks
/// triple-modulus degeneracies, `not_on_curve` the absence of an
/// equal-modulus pair (lambda is then not an infinite-size eigenvalue).
Branch classify_branch(const BulkSolution& roots, double mod_tol = 1e-6);

}  // namespace nhkc
