// Unit-circle root counting for complex polynomials via a three-term chain
// of conjugate-symmetric polynomials, with exact handling of roots on the
// circle (singular chains) and of nonessential pivot degeneracies.
#pragma once

#include <optional>
#include <stdexcept>

#include "nhkc/polynomial.hpp"

namespace nhkc {

struct BistritzOptions {
  // a chain polynomial counts as identically zero when all coefficients are
  // below zero_tol times the predecessor's coefficient scale
  double zero_tol = 1e-10;
  // |T_m(0)| below pivot_tol * scale(T_m) is an unusable pivot; the count is
  // retried on a rotated polynomial (circle counts are rotation invariant)
  double pivot_tol = 1e-8;
  // relative threshold for treating P(1) as zero (x = 1 is then factored out)
  double one_tol = 1e-12;
  // |T_i(1)| below sign_tol * max|T_j(1)| is skipped in the sign count and
  // flagged as ambiguous
  double sign_tol = 1e-12;
};

struct BistritzOutcome {
  int n = 0;       // degree of the input polynomial
  int inside = 0;  // alpha_n
  int on = 0;      // beta_n
  int outside = 0; // gamma_n
  int nu_n = 0;    // sign changes over the full sequence at x = 1
  std::optional<int> nu_s;            // singular case only
  std::optional<int> singular_level;  // level s with T_{s-1} identically zero
  bool ambiguous_signs = false;       // some |T_i(1)| below the sign tolerance
  int rotation_attempts = 0;          // > 0 when a pivot degeneracy forced a retry
};

struct BistritzError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Counts the roots of P inside / on / outside the unit circle without
/// locating them. Degree >= 1 required. Roots at x = 1 are factored out
/// first (they are on-circle roots); P(1) must be nonzero afterwards.
BistritzOutcome bistritz(const Polynomial& P, const BistritzOptions& opt = {});

/// The chain polynomials [T_n, T_{n-1}, ...] of P/P(1), stopping before the
/// first identically-zero member (the singular level, when one exists).
/// Requires P(1) != 0. Throws BistritzError on an unusable pivot.
std::vector<Polynomial> bistritz_chain(const Polynomial& P,
                                       const BistritzOptions& opt = {});

}  // namespace nhkc
