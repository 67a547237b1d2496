#include "nhkc/polynomial.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace nhkc {

Polynomial::Polynomial(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) coeffs_.push_back(Complex{0.0});
  double scale = 0.0;
  for (const auto& c : coeffs_) scale = std::max(scale, std::abs(c));
  // trailing trim threshold 1e-14 * max|coeff| per the degree contract
  while (coeffs_.size() > 1 && std::abs(coeffs_.back()) < 1e-14 * scale)
    coeffs_.pop_back();
}

Polynomial Polynomial::from_roots(std::span<const Complex> rts, Complex leading) {
  std::vector<Complex> c{leading};
  for (const Complex& r : rts) {
    c.push_back(Complex{0.0});
    for (int k = static_cast<int>(c.size()) - 1; k >= 1; --k)
      c[k] = c[k - 1] - r * c[k];
    c[0] = -r * c[0];
  }
  return Polynomial(std::move(c));
}

double Polynomial::coeff_scale() const {
  double s = 0.0;
  for (const auto& c : coeffs_) s = std::max(s, std::abs(c));
  return s;
}

bool Polynomial::is_zero(double abs_tol) const {
  for (const auto& c : coeffs_)
    if (std::abs(c) > abs_tol) return false;
  return true;
}

Complex Polynomial::eval(Complex z) const {
  Complex r{0.0};
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) r = r * z + *it;
  return r;
}

Polynomial Polynomial::derivative() const {
  if (degree() == 0) return Polynomial{};
  std::vector<Complex> d(coeffs_.size() - 1);
  for (size_t k = 1; k < coeffs_.size(); ++k)
    d[k - 1] = static_cast<double>(k) * coeffs_[k];
  return Polynomial(std::move(d));
}

Polynomial Polynomial::reciprocal_conjugate() const {
  std::vector<Complex> c(coeffs_.size());
  for (size_t k = 0; k < coeffs_.size(); ++k)
    c[k] = std::conj(coeffs_[coeffs_.size() - 1 - k]);
  return Polynomial(std::move(c));
}

Polynomial Polynomial::rotated(double theta) const {
  const Complex w = std::polar(1.0, theta);
  std::vector<Complex> c(coeffs_.size());
  Complex wk{1.0};
  for (size_t k = 0; k < coeffs_.size(); ++k, wk *= w) c[k] = coeffs_[k] * wk;
  return Polynomial(std::move(c));
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  std::vector<Complex> c(std::max(coeffs_.size(), o.coeffs_.size()), Complex{0.0});
  for (size_t k = 0; k < c.size(); ++k) c[k] = coeff(static_cast<int>(k)) + o.coeff(static_cast<int>(k));
  return Polynomial(std::move(c));
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
  std::vector<Complex> c(std::max(coeffs_.size(), o.coeffs_.size()), Complex{0.0});
  for (size_t k = 0; k < c.size(); ++k) c[k] = coeff(static_cast<int>(k)) - o.coeff(static_cast<int>(k));
  return Polynomial(std::move(c));
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  std::vector<Complex> c(coeffs_.size() + o.coeffs_.size() - 1, Complex{0.0});
  for (size_t i = 0; i < coeffs_.size(); ++i)
    for (size_t j = 0; j < o.coeffs_.size(); ++j) c[i + j] += coeffs_[i] * o.coeffs_[j];
  return Polynomial(std::move(c));
}

Polynomial Polynomial::scaled(Complex s) const {
  std::vector<Complex> c(coeffs_);
  for (auto& x : c) x *= s;
  return Polynomial(std::move(c));
}

std::pair<Polynomial, Polynomial> Polynomial::divide(const Polynomial& den) const {
  const int dn = degree(), dd = den.degree();
  if (dd < 0 || den.coeff_scale() == 0.0)
    throw std::invalid_argument("Polynomial::divide: zero divisor");
  if (dn < dd) return {Polynomial{}, *this};
  std::vector<Complex> quot(dn - dd + 1, Complex{0.0});
  std::vector<Complex> rem(coeffs_);
  for (int k = dn - dd; k >= 0; --k) {
    const Complex q = rem[k + dd] / den.coeff(dd);
    quot[k] = q;
    for (int j = 0; j <= dd; ++j) rem[k + j] -= q * den.coeff(j);
  }
  rem.resize(std::max(dd, 1));
  return {Polynomial(std::move(quot)), Polynomial(std::move(rem))};
}

Polynomial Polynomial::deflate_root_one() const {
  const int n = degree();
  if (n < 1) throw std::invalid_argument("deflate_root_one: constant polynomial");
  std::vector<Complex> out(n);
  Complex carry = coeffs_[n];
  for (int k = n - 1; k >= 0; --k) {
    out[k] = carry;
    carry = coeffs_[k] + carry;
  }
  return Polynomial(std::move(out));
}

Polynomial Polynomial::divided_by_z() const {
  if (degree() == 0) return Polynomial{};
  return Polynomial(std::vector<Complex>(coeffs_.begin() + 1, coeffs_.end()));
}

std::vector<Complex> roots(const Polynomial& p) {
  const int n = p.degree();
  const double scale = p.coeff_scale();
  if (n < 1 || scale == 0.0 || std::abs(p.coeff(n)) == 0.0)
    throw std::invalid_argument("roots: degenerate polynomial (degree < 1 or zero leading coefficient)");
  for (const auto& c : p.coeffs())
    if (!is_finite(c)) throw std::invalid_argument("roots: non-finite coefficient");

  // companion matrix of the monic-normalised polynomial
  Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(n, n);
  const Complex lead = p.coeff(n);
  for (int k = 0; k < n; ++k) C(k, n - 1) = -p.coeff(k) / lead;
  for (int k = 1; k < n; ++k) C(k, k - 1) = Complex{1.0};
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("roots: companion eigensolver failed to converge");

  const Polynomial dp = p.derivative();
  std::vector<Complex> out(n);
  for (int k = 0; k < n; ++k) {
    Complex x = es.eigenvalues()(k);
    Complex best = x;
    double best_res = std::abs(p.eval(x));
    for (int it = 0; it < 8; ++it) {
      const Complex d = dp.eval(x);
      if (std::abs(d) == 0.0) break;
      x -= p.eval(x) / d;
      const double res = std::abs(p.eval(x));
      if (res < best_res) {
        best = x;
        best_res = res;
      } else if (res > 10 * best_res) {
        break;  // Newton wandering off (cluster); keep the best seen
      }
    }
    out[k] = best;
  }
  return out;
}

Complex arccos_c(Complex z) {
  if (!is_finite(z)) throw std::invalid_argument("arccos_c: non-finite input");
  return std::acos(z);
}

std::pair<Complex, Complex> sqrt_pair(Complex z) {
  if (!is_finite(z)) throw std::invalid_argument("sqrt_pair: non-finite input");
  const Complex w = std::sqrt(z);
  return {w, -w};
}

}  // namespace nhkc
