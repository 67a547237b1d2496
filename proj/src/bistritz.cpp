#include "nhkc/bistritz.hpp"

#include <cmath>
#include <vector>

namespace nhkc {
namespace {

// fixed generic rotation angles tried in order when the chain hits an
// unusable pivot; the first entry is the unrotated frame
constexpr double kRotations[] = {0.0, 0.739085133215161, 1.875, 2.653589793,
                                 0.314159265, 1.234567890};

struct CoreResult {
  int inside = 0, on = 0, outside = 0;
  int nu_n = 0;
  std::optional<int> nu_s;
  std::optional<int> singular_level;
  bool ambiguous = false;
};

CoreResult count_all(const Polynomial& P, const BistritzOptions& opt, int depth,
                     int* rotations_used);

// One chain attempt in a fixed frame. P must satisfy P(1) = 1.
// Throws BistritzError on pivot degeneracies (caller rotates and retries).
CoreResult chain_count(const Polynomial& P, const BistritzOptions& opt, int depth,
                       int* rotations_used) {
  const int n = P.degree();
  std::vector<Polynomial> T;
  T.reserve(n + 1);
  const Polynomial Pr = P.reciprocal_conjugate();
  T.push_back(P + Pr);
  T.push_back((P - Pr).deflate_root_one());

  std::optional<int> singular_s;
  while (true) {
    const Polynomial& prev = T[T.size() - 2];
    const Polynomial& cur = T.back();
    const double ref = prev.coeff_scale();
    if (cur.coeff_scale() < opt.zero_tol * ref) {
      singular_s = prev.degree();  // T_{s-1} identically zero
      break;
    }
    if (cur.degree() == 0) break;  // chain complete down to T_0
    if (std::abs(cur.coeff(0)) < opt.pivot_tol * cur.coeff_scale())
      throw BistritzError("unusable pivot (T_m(0) ~ 0 with T_m not identically zero)");
    const Complex d = prev.coeff(0) / cur.coeff(0);
    const Polynomial lin({d, std::conj(d)});
    Polynomial next = (lin * cur - prev).divided_by_z();
    // exact arithmetic gives degree m-1; clamp numerical residue above it
    if (next.degree() > cur.degree() - 1) {
      std::vector<Complex> c(next.coeffs().begin(),
                             next.coeffs().begin() + cur.degree());
      next = Polynomial(std::move(c));
    }
    T.push_back(next);
  }

  CoreResult res;
  if (!singular_s) {
    // regular chain: sign changes at x = 1 count the roots outside
    std::vector<double> vals;
    vals.reserve(T.size());
    double scale = 0.0;
    for (const auto& t : T) {
      const Complex v = t.eval(Complex{1.0});
      vals.push_back(v.real());
      scale = std::max(scale, std::abs(v));
    }
    int nu = 0, prev_sign = 0;
    for (double v : vals) {
      if (std::abs(v) < opt.sign_tol * scale) {
        res.ambiguous = true;
        continue;
      }
      const int s = v > 0 ? 1 : -1;
      if (prev_sign != 0 && s != prev_sign) ++nu;
      prev_sign = s;
    }
    res.nu_n = nu;
    res.inside = n - nu;
    res.outside = nu;
    return res;
  }

  // singular at level s: T_{s-1} == 0, so T_s is conjugate-symmetric and
  // divides P. Its zeros are the on-circle zeros of P plus reciprocal-
  // conjugate pairs; the pair count equals the number of zeros of T_s'
  // outside the circle. The quotient P / T_s carries the rest.
  const int s = *singular_s;
  const Polynomial& Ts = T[T.size() - 2];
  if (std::abs(Ts.coeff(0)) < opt.pivot_tol * Ts.coeff_scale())
    throw BistritzError("unsupported structure: T_s(0) = 0 together with T_{s-1} == 0");

  int pair_count = 0;
  if (s > 1) {
    const CoreResult dsub = count_all(Ts.derivative(), opt, depth + 1, rotations_used);
    pair_count = dsub.outside;
    res.ambiguous = res.ambiguous || dsub.ambiguous;
  }
  const int on_circle = s - 2 * pair_count;
  if (on_circle < 0)
    throw BistritzError("unsupported structure: inconsistent singular root counts");

  auto [R, rem] = P.divide(Ts);
  const double rel_rem = rem.coeff_scale() / P.coeff_scale();
  if (rel_rem > 1e-6)
    throw BistritzError("unsupported structure: singular factor does not divide P");

  CoreResult dR;
  if (R.degree() > 0) {
    dR = count_all(R, opt, depth + 1, rotations_used);
    res.ambiguous = res.ambiguous || dR.ambiguous;
  }
  res.inside = dR.inside + pair_count;
  res.on = on_circle + dR.on;
  res.outside = dR.outside + pair_count;
  res.singular_level = s;
  res.nu_s = (on_circle + s) / 2;
  res.nu_n = n - res.inside;
  return res;
}

// Full count of an arbitrary polynomial: strips origin and x = 1 roots, then
// runs the chain, retrying in rotated frames on pivot degeneracies.
CoreResult count_all(const Polynomial& P0, const BistritzOptions& opt, int depth,
                     int* rotations_used) {
  if (depth > 64) throw BistritzError("recursion depth exceeded");
  Polynomial P = P0;
  if (P.coeff_scale() == 0.0) throw BistritzError("zero polynomial");

  CoreResult extra;
  // roots at the origin are inside
  while (P.degree() > 0 && std::abs(P.coeff(0)) < 1e-14 * P.coeff_scale()) {
    P = P.divided_by_z();
    ++extra.inside;
  }
  // roots at x = 1 are on the circle
  while (P.degree() > 0) {
    const Complex v = P.eval(Complex{1.0});
    if (std::abs(v) < opt.one_tol * P.coeff_scale() * (P.degree() + 1)) {
      P = P.deflate_root_one();
      ++extra.on;
    } else {
      break;
    }
  }
  if (P.degree() == 0) return extra;

  std::optional<BistritzError> last;
  for (double theta : kRotations) {
    Polynomial Q = theta == 0.0 ? P : P.rotated(theta);
    const Complex v1 = Q.eval(Complex{1.0});
    if (std::abs(v1) < 1e-9 * Q.coeff_scale()) continue;  // root rotated onto 1
    Q = Q.scaled(Complex{1.0} / v1);
    try {
      CoreResult r = chain_count(Q, opt, depth, rotations_used);
      if (theta != 0.0 && rotations_used) ++*rotations_used;
      r.inside += extra.inside;
      r.on += extra.on;
      return r;
    } catch (const BistritzError& e) {
      last = e;
    }
  }
  throw last.value_or(BistritzError("all rotation frames degenerate"));
}

}  // namespace

std::vector<Polynomial> bistritz_chain(const Polynomial& P,
                                       const BistritzOptions& opt) {
  if (P.degree() < 1)
    throw std::invalid_argument("bistritz_chain: degree >= 1 required");
  const Complex v1 = P.eval(Complex{1.0});
  if (std::abs(v1) < opt.one_tol * P.coeff_scale() * (P.degree() + 1))
    throw std::invalid_argument("bistritz_chain: P(1) = 0");
  const Polynomial Q = P.scaled(Complex{1.0} / v1);
  const Polynomial Qr = Q.reciprocal_conjugate();
  std::vector<Polynomial> T;
  T.push_back(Q + Qr);
  T.push_back((Q - Qr).deflate_root_one());
  while (true) {
    const Polynomial& prev = T[T.size() - 2];
    const Polynomial& cur = T.back();
    if (cur.coeff_scale() < opt.zero_tol * prev.coeff_scale()) {
      T.pop_back();  // stop before the identically-zero member
      break;
    }
    if (cur.degree() == 0) break;
    if (std::abs(cur.coeff(0)) < opt.pivot_tol * cur.coeff_scale())
      throw BistritzError("bistritz_chain: unusable pivot");
    const Complex d = prev.coeff(0) / cur.coeff(0);
    const Polynomial lin({d, std::conj(d)});
    Polynomial next = (lin * cur - prev).divided_by_z();
    if (next.degree() > cur.degree() - 1) {
      std::vector<Complex> c(next.coeffs().begin(),
                             next.coeffs().begin() + cur.degree());
      next = Polynomial(std::move(c));
    }
    T.push_back(next);
  }
  return T;
}

BistritzOutcome bistritz(const Polynomial& P, const BistritzOptions& opt) {
  if (P.degree() < 1)
    throw std::invalid_argument("bistritz: degree >= 1 required");
  for (const auto& c : P.coeffs())
    if (!is_finite(c)) throw std::invalid_argument("bistritz: non-finite coefficient");

  int rotations = 0;
  const CoreResult r = count_all(P, opt, 0, &rotations);
  BistritzOutcome out;
  out.n = P.degree();
  out.inside = r.inside;
  out.on = r.on;
  out.outside = r.outside;
  out.nu_n = (r.singular_level || r.on > 0) ? P.degree() - r.inside : r.nu_n;
  out.nu_s = r.nu_s;
  out.singular_level = r.singular_level;
  out.ambiguous_signs = r.ambiguous;
  out.rotation_attempts = rotations;
  return out;
}

}  // namespace nhkc
