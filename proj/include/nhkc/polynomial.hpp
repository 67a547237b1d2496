// Complex polynomials with root extraction and the complex scalar helpers
// used throughout the library.
#pragma once

#include <complex>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace nhkc {

using Complex = std::complex<double>;

inline bool is_finite(Complex z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

/// Univariate polynomial with complex coefficients, stored in ascending
/// degree. Trailing coefficients below 1e-14 of the largest magnitude are
/// trimmed on construction, so degree() reflects the numerically effective
/// leading term.
class Polynomial {
 public:
  Polynomial() : coeffs_{Complex{0.0}} {}
  explicit Polynomial(std::vector<Complex> coeffs);

  static Polynomial from_roots(std::span<const Complex> roots,
                               Complex leading = Complex{1.0});

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<Complex>& coeffs() const { return coeffs_; }
  /// Coefficient of z^k (0 beyond the stored degree).
  Complex coeff(int k) const {
    return (k >= 0 && k < static_cast<int>(coeffs_.size())) ? coeffs_[k]
                                                            : Complex{0.0};
  }
  double coeff_scale() const;  // max_k |c_k|
  bool is_zero(double abs_tol = 0.0) const;

  Complex eval(Complex z) const;  // Horner
  Polynomial derivative() const;

  /// z^n conj(P(1/conj z)): coefficients reversed and conjugated at the
  /// polynomial's own degree.
  Polynomial reciprocal_conjugate() const;
  /// Coefficients of P(e^{i theta} z).
  Polynomial rotated(double theta) const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial scaled(Complex s) const;

  /// Long division; returns {quotient, remainder}.
  std::pair<Polynomial, Polynomial> divide(const Polynomial& den) const;
  /// Exact synthetic division by (z - 1); the caller guarantees P(1) ~ 0.
  Polynomial deflate_root_one() const;
  /// Drops the constant term; the caller guarantees it vanishes.
  Polynomial divided_by_z() const;

 private:
  std::vector<Complex> coeffs_;
};

/// All `degree` roots (with multiplicity), via the companion matrix followed
/// by Newton polishing. Multiple roots come back as numerically close
/// clusters. Throws std::invalid_argument for degree < 1 or an all-zero
/// input.
std::vector<Complex> roots(const Polynomial& p);

/// Principal-branch complex arccosine; cos(arccos_c(z)) == z to 1e-12.
Complex arccos_c(Complex z);

/// Both square roots {w, -w} with w the principal branch.
std::pair<Complex, Complex> sqrt_pair(Complex z);

}  // namespace nhkc
