// Chain parameters, derived couplings, the bulk quartic and the periodic
// dispersion of the open non-hermitian Kitaev chain.
#pragma once

#include <array>

#include "nhkc/polynomial.hpp"

namespace nhkc {

/// The five complex couplings: onsite term, right/left hopping, pairing.
struct ModelParams {
  Complex m, t1, t2, d1, d2;
};

struct DerivedQuantities {
  Complex t_s;  // t1 + t2
  Complex t_d;  // t1 - t2
  Complex D2;   // d1 d2 - t1 t2
};

DerivedQuantities derived(const ModelParams& p);

void validate(const ModelParams& p);  // throws on non-finite couplings

/// Degree-4 polynomial in x whose roots generate the eigenvector building
/// blocks at a given lambda. `degenerate` is set when D2 vanishes (the
/// Hatano-Nelson-like d1 d2 = 0 regime); callers route those parameters to
/// the closed-form finite-chain spectrum instead.
struct BulkQuartic {
  Polynomial poly;
  bool degenerate;
};
BulkQuartic bulk_quartic(const ModelParams& p, Complex lambda);

/// One (x, a) solution of the bulk recurrence. `a_flagged` marks pairs where
/// both recovery denominators degenerate and `a` is not reliable.
struct BulkPair {
  Complex x, a;
  bool a_flagged = false;
};

/// The four bulk solutions at a given lambda, sorted by |x| descending.
struct BulkSolution {
  std::array<BulkPair, 4> pairs;
  Complex lambda;
};
BulkSolution bulk_solve(const ModelParams& p, Complex lambda);

/// Residuals of the two bulk recurrence equations for a candidate (x, a).
std::pair<Complex, Complex> bulk_residual(const ModelParams& p, Complex lambda,
                                          Complex x, Complex a);

/// Two-band periodic dispersion (lambda_+(k), lambda_-(k)), principal root.
std::pair<Complex, Complex> periodic_lambda(const ModelParams& p, double k);

/// Rigid phase rotation: m, t1, t2, d1, d2 each pick up e^{i phi}, so the
/// spectrum maps as lambda -> lambda e^{i phi}.
ModelParams phase_rotate(const ModelParams& p, double phi);

}  // namespace nhkc
