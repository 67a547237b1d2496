#include "nhkc/model.hpp"

#include <algorithm>
#include <cmath>

namespace nhkc {

DerivedQuantities derived(const ModelParams& p) {
  return {p.t1 + p.t2, p.t1 - p.t2, p.d1 * p.d2 - p.t1 * p.t2};
}

void validate(const ModelParams& p) {
  for (Complex c : {p.m, p.t1, p.t2, p.d1, p.d2})
    if (!is_finite(c)) throw std::invalid_argument("ModelParams: non-finite coupling");
}

static double param_scale(const ModelParams& p) {
  double s = 0.0;
  for (Complex c : {p.m, p.t1, p.t2, p.d1, p.d2}) s = std::max(s, std::abs(c));
  return s;
}

BulkQuartic bulk_quartic(const ModelParams& p, Complex lambda) {
  validate(p);
  const auto [t_s, t_d, D2] = derived(p);
  const Complex c4 = D2;
  const Complex c3 = -(lambda * t_d + p.m * t_s);
  const Complex c2 =
      lambda * lambda - p.m * p.m - 2.0 * p.d1 * p.d2 - p.t1 * p.t1 - p.t2 * p.t2;
  const Complex c1 = lambda * t_d - p.m * t_s;
  const Complex c0 = D2;
  const double sc = param_scale(p);
  const bool degenerate = std::abs(D2) <= 1e-14 * sc * sc;
  return {Polynomial({c0, c1, c2, c3, c4}), degenerate};
}

std::pair<Complex, Complex> bulk_residual(const ModelParams& p, Complex lambda,
                                          Complex x, Complex a) {
  const Complex r1 =
      p.t2 - a * p.d1 + (p.m - lambda) * x + (p.t1 + a * p.d1) * x * x;
  const Complex r2 = p.d2 - a * p.t1 + (-p.m - lambda) * a * x +
                     (-p.d2 - a * p.t2) * x * x;
  return {r1, r2};
}

BulkSolution bulk_solve(const ModelParams& p, Complex lambda) {
  const BulkQuartic q = bulk_quartic(p, lambda);
  if (q.degenerate)
    throw std::domain_error("bulk_solve: D2 = 0 (d1 d2 = t1 t2); use the closed-form path");
  const std::vector<Complex> xs = roots(q.poly);

  BulkSolution sol;
  sol.lambda = lambda;
  const double sc = param_scale(p) + std::abs(lambda);
  for (int i = 0; i < 4; ++i) {
    const Complex x = xs[i];
    // a from the first bulk equation; second equation as fallback when the
    // first denominator d1 (x^2 - 1) degenerates
    const Complex den1 = p.d1 * (x * x - Complex{1.0});
    const Complex den2 = p.t1 + (p.m + lambda) * x + p.t2 * x * x;
    BulkPair pair;
    pair.x = x;
    if (std::abs(den1) > 1e-10 * sc) {
      pair.a = -(p.t2 + (p.m - lambda) * x + p.t1 * x * x) / den1;
    } else if (std::abs(den2) > 1e-10 * sc) {
      pair.a = p.d2 * (Complex{1.0} - x * x) / den2;
    } else {
      pair.a = Complex{0.0};
      pair.a_flagged = true;
    }
    sol.pairs[i] = pair;
  }
  std::sort(sol.pairs.begin(), sol.pairs.end(),
            [](const BulkPair& l, const BulkPair& r) { return std::abs(l.x) > std::abs(r.x); });
  return sol;
}

std::pair<Complex, Complex> periodic_lambda(const ModelParams& p, double k) {
  validate(p);
  const auto [t_s, t_d, D2] = derived(p);
  const double sk = std::sin(k), ck = std::cos(k);
  const Complex base = Complex{0.0, 1.0} * t_d * sk;
  const Complex arg = 4.0 * p.d1 * p.d2 * sk * sk + (p.m + t_s * ck) * (p.m + t_s * ck);
  const Complex rt = std::sqrt(arg);
  return {base + rt, base - rt};
}

ModelParams phase_rotate(const ModelParams& p, double phi) {
  const Complex w = std::polar(1.0, phi);
  return {p.m * w, p.t1 * w, p.t2 * w, p.d1 * w, p.d2 * w};
}

}  // namespace nhkc
