#include "nhkc/zeromode.hpp"

#include <cmath>

namespace nhkc {

namespace {

struct ZeroRoots {
  Complex x_mm, x_pm, x_mp, x_pp;
  Complex sq_num, sq_den;  // sqrt(4 d1 d2 + m^2 - 4 t1 t2), sqrt(4 d1 d2 + t_d^2)
};

// the x formulas need neither d1 != 0 nor D2 != 0
ZeroRoots zero_roots_raw(const ModelParams& p) {
  const Complex sq_num = std::sqrt(4.0 * p.d1 * p.d2 + p.m * p.m - 4.0 * p.t1 * p.t2);
  const Complex sq_den =
      std::sqrt(4.0 * p.d1 * p.d2 + (p.t1 - p.t2) * (p.t1 - p.t2));
  const Complex ts = p.t1 + p.t2;
  ZeroRoots r;
  r.sq_num = sq_num;
  r.sq_den = sq_den;
  r.x_mm = (-p.m - sq_num) / (ts - sq_den);
  r.x_pm = (-p.m + sq_num) / (ts - sq_den);
  r.x_mp = (-p.m - sq_num) / (ts + sq_den);
  r.x_pp = (-p.m + sq_num) / (ts + sq_den);
  return r;
}

}  // namespace

ZeroModeSolution zero_mode_roots(const ModelParams& p) {
  validate(p);
  const auto [t_s, t_d, D2] = derived(p);
  double sc = 0.0;
  for (Complex c : {p.m, p.t1, p.t2, p.d1, p.d2}) sc = std::max(sc, std::abs(c));
  if (std::abs(p.d1) <= 1e-14 * sc)
    throw std::domain_error(
        "zero_mode_roots: d1 = 0; the d1 d2 = 0 chain has no finite-size zero "
        "mode (use the closed-form spectrum)");
  if (std::abs(D2) <= 1e-14 * sc * sc)
    throw std::domain_error("zero_mode_roots: D2 = 0 makes the y-normalised form singular");

  const ZeroRoots r = zero_roots_raw(p);
  ZeroModeSolution sol;
  sol.x_mm = r.x_mm;
  sol.x_pm = r.x_pm;
  sol.x_mp = r.x_mp;
  sol.x_pp = r.x_pp;
  sol.a_m = (-t_d - r.sq_den) / (2.0 * p.d1);
  sol.a_p = (-t_d + r.sq_den) / (2.0 * p.d1);
  const Complex norm = std::sqrt(-4.0 * D2);
  sol.y1 = -p.m / norm;
  sol.y2 = t_s / norm;
  return sol;
}

ZeroModeVerdict has_zero_mode(const ModelParams& p, double boundary_band) {
  validate(p);
  double sc = 0.0;
  for (Complex c : {p.m, p.t1, p.t2, p.d1, p.d2}) sc = std::max(sc, std::abs(c));
  const Complex disc = p.t1 * p.t2 - p.d1 * p.d2;  // = -D2
  if (std::abs(disc) <= 1e-14 * sc * sc)
    throw std::domain_error(
        "has_zero_mode: t1 t2 - d1 d2 = 0; criterion arguments diverge");

  const Complex root = 2.0 * std::sqrt(disc);
  ZeroModeVerdict v;
  v.lhs = std::abs(arccos_c(-p.m / root).imag());
  v.rhs = std::abs(arccos_c((p.t1 + p.t2) / root).imag());
  v.boundary = std::abs(v.lhs - v.rhs) < boundary_band;
  v.exists = !v.boundary && v.lhs < v.rhs;

  // branch identified by the direct modulus test: the labels of the closed
  // forms may swap under the normalisation, the moduli do not
  const ZeroRoots r = zero_roots_raw(p);
  if (std::abs(r.x_mm) < 1.0 && std::abs(r.x_pm) < 1.0)
    v.side = ZeroModeSide::minus_branch;
  else if (std::abs(r.x_mp) < 1.0 && std::abs(r.x_pp) < 1.0)
    v.side = ZeroModeSide::plus_branch;
  else
    v.side = ZeroModeSide::none;
  return v;
}

bool hermitian_zero_mode_condition(double m, double t, double phi_t, double d,
                                   double /*phi_d*/) {
  const double ct = std::cos(phi_t), st = std::sin(phi_t);
  return m * m < 4.0 * t * t * ct * ct && d * d > t * t * st * st;
}

Vector zero_mode_state(const ModelParams& p, int L) {
  if (L < 1) throw std::invalid_argument("zero_mode_state: L >= 1 required");
  const ZeroModeVerdict v = has_zero_mode(p);
  if (!v.exists || v.side == ZeroModeSide::none)
    throw std::domain_error("zero_mode_state: no zero mode for these parameters");
  const ZeroModeSolution sol = zero_mode_roots(p);

  Complex xa, xb, a;
  if (v.side == ZeroModeSide::plus_branch) {
    xa = sol.x_mp;
    xb = sol.x_pp;
    a = sol.a_p;
  } else {
    xa = sol.x_mm;
    xb = sol.x_pm;
    a = sol.a_m;
  }
  // psi = phi(xa, a) - phi(xb, a); the shared a makes the site-0 extension
  // vanish, so the left boundary equations hold identically
  Vector psi(2 * L);
  Complex pa = xa, pb = xb;
  for (int j = 0; j < L; ++j, pa *= xa, pb *= xb) {
    psi(2 * j) = pa - pb;
    psi(2 * j + 1) = a * (pa - pb);
  }
  psi.normalize();
  return psi;
}

}  // namespace nhkc
