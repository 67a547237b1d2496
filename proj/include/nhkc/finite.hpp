// Finite-chain assembly and diagonalisation, the t1 = t2 determinant-
// condition residuals, the d1 d2 = 0 closed-form spectrum, and eigenstate
// localization profiling.
#pragma once

#include <Eigen/Dense>
#include <optional>

#include "nhkc/model.hpp"

namespace nhkc {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// 2L x 2L single-particle matrix in the (c_1^dag, c_1, c_2^dag, c_2, ...)
/// ordering: diagonal blocks diag(m, -m), superdiagonal blocks
/// rows (t1, d1 / -d2, -t2), subdiagonal blocks rows (t2, -d1 / d2, -t1).
Matrix assemble_bdg(const ModelParams& p, int L);

enum class Precision { trusted, suspect };

struct EigenDecomposition {
  std::vector<Complex> values;     // all 2L eigenvalues
  std::optional<Matrix> vectors;   // right eigenvectors as columns
  // max over eigenvalues of the distance from -lambda to the spectrum
  // multiset; nonzero values diagnose precision loss of the dense solver
  double pairing_residual = 0.0;
  Precision precision_flag = Precision::trusted;
};

/// Dense nonsymmetric diagonalisation (LAPACK zgeev). The flag turns
/// suspect when pairing_residual > pairing_tol * max|lambda|.
EigenDecomposition eigensolve(const Matrix& mat, bool want_vectors,
                              double pairing_tol = 1e-6);

/// The 2L closed-form eigenvalues for d1 d2 = 0:
/// +-m + 2 sqrt(t1) sqrt(t2) cos(j pi / (L+1)), j = 1..L.
/// Throws std::domain_error when d1 d2 != 0.
std::vector<Complex> spectrum_closed_form_d1d2_zero(const ModelParams& p, int L);

/// Laurent sum x^{-L+1} + x^{-L+3} + ... + x^{L-1}; equals sin(L a)/sin(a)
/// for x = e^{ia} and the Chebyshev value U_{L-1}(cos a). Throws on x = 0.
Complex sine_ratio(int L, Complex x);

/// Residuals of the two equations determining the t1 = t2 spectrum: the
/// root-pair cosine relation and the determinant condition (term-by-term
/// sum, scaled by its largest term). Both vanish iff lambda is an open-chain
/// eigenvalue. Throws when the root quartet is not two reciprocal pairs.
std::pair<Complex, Complex> deteqn_residual(const ModelParams& p, int L,
                                            Complex lambda);

/// Closed form of the determinant-condition sum. Requires cos(alpha) !=
/// cos(beta); the removable-singularity case throws std::domain_error and
/// callers fall back to the term-by-term sum.
Complex deteqn_summed_form(const ModelParams& p, int L, Complex alpha,
                           Complex beta);

enum class LocalizationVerdict { skin_left, skin_right, extended };

struct LocalizationReport {
  double decay_fit_rate = 0.0;      // log-amplitude slope per site
  double fit_quality = 0.0;         // R^2 of the log-linear fit
  double boundary_mass_left = 0.0;  // weight in the first 10% of sites
  double boundary_mass_right = 0.0; // weight in the last 10% of sites
  LocalizationVerdict verdict = LocalizationVerdict::extended;
};

/// Log-linear fit of the per-site amplitude profile (site amplitude = max of
/// the two components). The default thresholds (rate ln(1.05) per site,
/// quality 0.9) are tuning choices, exposed as knobs.
LocalizationReport localization(const Vector& vec, int L,
                                double rate_threshold = std::log(1.05),
                                double quality_threshold = 0.9);

}  // namespace nhkc
