#include "nhkc/skin.hpp"

#include <cmath>
#include <sstream>

namespace nhkc {

namespace {

double param_scale(const ModelParams& p) {
  double s = 0.0;
  for (Complex c : {p.m, p.t1, p.t2, p.d1, p.d2}) s = std::max(s, std::abs(c));
  return s;
}

// angle congruence modulo `mod`, tolerance in radians
bool angle_match(double a, double b, double mod, double tol = 1e-9) {
  double d = std::fmod(a - b, mod);
  if (d < 0) d += mod;
  return d < tol || mod - d < tol;
}

std::string format_intervals(const std::vector<KInterval>& iv) {
  std::ostringstream os;
  os.precision(6);
  for (size_t i = 0; i < iv.size(); ++i) {
    if (i) os << " u ";
    os << "(" << iv[i].lo << ", " << iv[i].hi << ")";
  }
  return os.str();
}

// k-intervals in [0, 2 pi) where q2 c^2 + q1 c + q0 (c = cos k) has the
// requested sign
std::vector<KInterval> cos_quadratic_ranges(double q2, double q1, double q0,
                                            bool want_negative) {
  // sample-based sign analysis on cos k; robust for every coefficient case
  auto f = [&](double ck) { return q2 * ck * ck + q1 * ck + q0; };
  std::vector<double> edges{0.0};
  // roots of the quadratic mapped to k
  if (std::abs(q2) > 1e-300) {
    const double disc = q1 * q1 - 4.0 * q2 * q0;
    if (disc >= 0.0) {
      for (double sgn : {-1.0, 1.0}) {
        const double croot = (-q1 + sgn * std::sqrt(disc)) / (2.0 * q2);
        if (croot >= -1.0 && croot <= 1.0) {
          edges.push_back(std::acos(croot));
          edges.push_back(2.0 * M_PI - std::acos(croot));
        }
      }
    }
  } else if (std::abs(q1) > 1e-300) {
    const double croot = -q0 / q1;
    if (croot >= -1.0 && croot <= 1.0) {
      edges.push_back(std::acos(croot));
      edges.push_back(2.0 * M_PI - std::acos(croot));
    }
  }
  edges.push_back(2.0 * M_PI);
  std::sort(edges.begin(), edges.end());
  std::vector<KInterval> out;
  for (size_t i = 0; i + 1 < edges.size(); ++i) {
    if (edges[i + 1] - edges[i] < 1e-12) continue;
    const double mid = 0.5 * (edges[i] + edges[i + 1]);
    const double v = f(std::cos(mid));
    if ((want_negative && v < 0.0) || (!want_negative && v > 0.0)) {
      if (!out.empty() && std::abs(out.back().hi - edges[i]) < 1e-12)
        out.back().hi = edges[i + 1];
      else
        out.push_back({edges[i], edges[i + 1]});
    }
  }
  return out;
}

bool k_in_ranges(double k, const std::vector<KInterval>& iv) {
  for (const auto& r : iv)
    if (k > r.lo && k < r.hi) return true;
  return false;
}

}  // namespace

SkinContext make_skin_context(const ModelParams& p, double k, int branch_sign) {
  const auto [lp, lm] = periodic_lambda(p, k);
  const Complex lambda = branch_sign >= 0 ? lp : lm;
  const auto [t_s, t_d, D2] = derived(p);
  const Complex N2 = lambda * lambda - (p.m + t_s) * (p.m + t_s);
  const double sc = param_scale(p) + std::abs(lambda);
  if (std::abs(N2) <= 1e-12 * sc * sc)
    throw std::domain_error("make_skin_context: N2 = 0 (curve endpoint)");
  SkinContext ctx;
  ctx.N2 = N2;
  ctx.lambda = lambda;
  ctx.k = k;
  ctx.P = bulk_quartic(p, lambda).poly.scaled(Complex{1.0} / N2);
  return ctx;
}

TPolynomials t_polynomials_complex(const SkinContext& ctx, const ModelParams& p) {
  const auto [t_s, t_d, D2] = derived(p);
  const Complex N2 = ctx.N2, lam = ctx.lambda;
  const double NN = std::norm(N2);
  const Complex N2c = std::conj(N2);
  const Complex D2c = std::conj(D2);
  const Complex I{0.0, 1.0};

  const double ReDN = (D2 * N2c).real();
  const double ImLTN = (lam * t_d * N2c).imag();
  const double ReMTN = (p.m * t_s * N2c).real();
  const double ImDN = (D2 * N2c).imag();
  const double ImMTN = (p.m * t_s * N2c).imag();
  const double ReLTN = (lam * t_d * N2c).real();
  const double ReLTD = (lam * t_d * D2c).real();
  const double ImMTD = (p.m * t_s * D2c).imag();
  const double ImND = (N2 * D2c).imag();  // = -ImDN

  TPolynomials out;
  out.T4 = Polynomial({(2.0 * ReDN) / NN,
                       (2.0 * I * ImLTN - 2.0 * ReMTN) / NN,
                       (-4.0 * ReDN + 4.0 * ReMTN) / NN + 2.0,
                       (-2.0 * I * ImLTN - 2.0 * ReMTN) / NN,
                       (2.0 * ReDN) / NN});
  out.T3 = Polynomial({(-2.0 * I * ImDN) / NN,
                       (-2.0 * I * ImDN + 2.0 * I * ImMTN - 2.0 * ReLTN) / NN,
                       (2.0 * I * ImDN - 2.0 * I * ImMTN - 2.0 * ReLTN) / NN,
                       (2.0 * I * ImDN) / NN});

  const double t3_scale = std::max({std::abs(ImDN), std::abs(ImMTN), std::abs(ReLTN)});
  const double ref = std::max(NN, out.T4.coeff_scale() * NN);
  if (t3_scale <= 1e-10 * ref) {
    out.singular_level_signal = 4;  // T3 vanishes identically
    return out;
  }

  const Complex den2 = I * ImDN;
  out.T2 = Polynomial({(2.0 * ReLTD - 2.0 * I * ImMTD) / den2,
                       (4.0 * I * ImMTD) / den2 - 2.0,
                       (-2.0 * ReLTD - 2.0 * I * ImMTD) / den2});

  const double q = ReLTD * ReLTD + ImMTD * ImMTD;
  if (q <= 1e-20 * ref * ref) {
    out.singular_level_signal = 2;  // T1 denominators vanish
    return out;
  }
  const double b1 = ReLTN - ImND * ImND * ReLTD / q;
  const double b2 = ImMTN + 4.0 * ImND + ImND * ImND * ImMTD / q -
                    4.0 * ImND * ReLTD * ReLTD / q;
  out.T1 = Polynomial({(2.0 * b1 - 2.0 * I * b2) / NN, (2.0 * b1 + 2.0 * I * b2) / NN});
  if (out.T1->coeff_scale() <= 1e-10 * std::max(1.0, out.T2->coeff_scale())) {
    out.singular_level_signal = 2;  // T1 vanishes identically
    out.T1.reset();
  }
  return out;
}

double t0_constant(const Polynomial& T2, const Polynomial& T1) {
  const Complex t10 = T1.coeff(0);
  if (std::abs(t10) <= 1e-14 * std::max(T1.coeff_scale(), T2.coeff_scale()))
    throw std::domain_error("t0_constant: T1(0) = 0 signals a deeper singular level");
  const Complex v = 2.0 * (T2.coeff(0) / t10).real() * T1.eval(Complex{1.0}) -
                    T2.eval(Complex{1.0});
  return v.real();
}

SkinVerdict classify_skin(const ModelParams& p, double k, int branch_sign,
                          const BistritzOptions& opt) {
  const auto [lp, lm] = periodic_lambda(p, k);
  const Complex lambda = branch_sign >= 0 ? lp : lm;
  const auto [t_s, t_d, D2] = derived(p);

  SkinVerdict v;
  v.k = k;
  v.lambda = lambda;

  const double sc = param_scale(p) + std::abs(lambda);
  // excluded special values: lambda = -m +- t_s (double-a resultant factors)
  // and the N2 = 0 endpoints where the P(1) = 1 rescaling degenerates
  const Complex N2 = lambda * lambda - (p.m + t_s) * (p.m + t_s);
  if (std::abs(lambda - (-p.m + t_s)) < 1e-9 * sc ||
      std::abs(lambda - (-p.m - t_s)) < 1e-9 * sc ||
      std::abs(N2) <= 1e-12 * sc * sc) {
    v.special_point = true;
    return v;
  }

  const Polynomial quartic = bulk_quartic(p, lambda).poly;
  const BistritzOutcome outcome = bistritz(quartic, opt);
  v.on_circle_count = outcome.on;
  v.skin = outcome.on < 2;

  // direct modulus inspection as a cross-check
  int near_circle = 0;
  try {
    for (const Complex& x : roots(quartic))
      if (std::abs(std::abs(x) - 1.0) < 1e-6) ++near_circle;
  } catch (const std::exception&) {
    near_circle = -1;
  }
  v.crosscheck_agrees = near_circle < 0 || (near_circle >= 2) == !v.skin;

  for (const auto& cond : no_skin_conditions(p)) {
    if (cond.all_k || k_in_ranges(k, cond.k_ranges)) {
      v.matched_condition = cond.label;
      break;
    }
  }
  return v;
}

std::vector<NoSkinCondition> no_skin_conditions(const ModelParams& p) {
  std::vector<NoSkinCondition> out;
  const double sc = param_scale(p);
  const auto [t_s, t_d, D2] = derived(p);

  auto all_k_row = [](std::string label) {
    NoSkinCondition c;
    c.label = std::move(label);
    c.all_k = true;
    c.k_range_text = "forall k";
    return c;
  };

  // kappa-family conditions, valid for arbitrary complex parameters
  if (std::abs(p.m) <= 1e-12 * sc) out.push_back(all_k_row("m=0"));
  if (std::abs(t_d) <= 1e-12 * sc) out.push_back(all_k_row("t1=t2"));
  if (std::abs(t_s) <= 1e-12 * sc) out.push_back(all_k_row("t1=-t2"));

  const bool all_real =
      std::abs(p.m.imag()) <= 1e-12 * sc && std::abs(p.t1.imag()) <= 1e-12 * sc &&
      std::abs(p.t2.imag()) <= 1e-12 * sc && std::abs(p.d1.imag()) <= 1e-12 * sc &&
      std::abs(p.d2.imag()) <= 1e-12 * sc;

  if (all_real) {
    const double dd = (p.d1 * p.d2).real();
    if (dd < 0.0) {
      // 4 d1 d2 sin^2 k + (m + t_s cos k)^2 < 0, quadratic in cos k
      const double ts = t_s.real(), m = p.m.real();
      const auto iv = cos_quadratic_ranges(ts * ts - 4.0 * dd, 2.0 * m * ts,
                                           m * m + 4.0 * dd, /*want_negative=*/true);
      if (!iv.empty()) {
        NoSkinCondition c;
        c.label = "d1d2<0";
        c.k_ranges = iv;
        c.k_range_text = format_intervals(iv);
        out.push_back(std::move(c));
      }
    }
    return out;
  }

  // complex phase-locked rows: everything referenced to phi = arg(t_s)
  if (std::abs(t_s) <= 1e-12 * sc) return out;
  const double phi = std::arg(t_s);
  const bool m_locked =
      std::abs(p.m) <= 1e-12 * sc || angle_match(std::arg(p.m), phi, M_PI);
  if (!m_locked) return out;
  const Complex dd = p.d1 * p.d2;
  if (std::abs(dd) <= 1e-12 * sc * sc) return out;
  if (!angle_match(std::arg(dd), 2.0 * phi, M_PI)) return out;

  // signed magnitudes along the locked direction
  const double m_t = std::abs(p.m) == 0.0
                         ? 0.0
                         : (angle_match(std::arg(p.m), phi, 2.0 * M_PI)
                                ? std::abs(p.m)
                                : -std::abs(p.m));
  const double D_t = angle_match(std::arg(dd), 2.0 * phi, 2.0 * M_PI)
                         ? std::abs(dd)
                         : -std::abs(dd);
  const double ts_mag = std::abs(t_s);

  const bool td_imag_locked =
      std::abs(t_d) <= 1e-12 * sc || angle_match(std::arg(t_d), phi + M_PI / 2.0, M_PI);
  const bool td_real_locked =
      std::abs(t_d) > 1e-12 * sc && angle_match(std::arg(t_d), phi, M_PI);

  if (td_imag_locked && D_t > 0.0) {
    out.push_back(all_k_row("phase-locked d1d2>0"));
  } else if (td_imag_locked && D_t < 0.0) {
    const auto iv = cos_quadratic_ranges(ts_mag * ts_mag - 4.0 * D_t, 2.0 * m_t * ts_mag,
                                         m_t * m_t + 4.0 * D_t, /*want_negative=*/false);
    if (!iv.empty()) {
      NoSkinCondition c;
      c.label = "phase-locked d1d2<0 (imaginary t_d)";
      c.k_ranges = iv;
      c.k_range_text = format_intervals(iv);
      out.push_back(std::move(c));
    }
  } else if (td_real_locked && D_t < 0.0) {
    const auto iv = cos_quadratic_ranges(ts_mag * ts_mag - 4.0 * D_t, 2.0 * m_t * ts_mag,
                                         m_t * m_t + 4.0 * D_t, /*want_negative=*/true);
    if (!iv.empty()) {
      NoSkinCondition c;
      c.label = "phase-locked d1d2<0 (real t_d)";
      c.k_ranges = iv;
      c.k_range_text = format_intervals(iv);
      out.push_back(std::move(c));
    }
  }
  return out;
}

bool spot_check_isolated(const ModelParams& p, Complex lambda, double mod_tol) {
  const Polynomial quartic = bulk_quartic(p, lambda).poly;
  int near = 0;
  for (const Complex& x : roots(quartic))
    if (std::abs(std::abs(x) - 1.0) < mod_tol) ++near;
  if (near < 2) return false;
  try {
    const BistritzOutcome outcome = bistritz(quartic);
    return outcome.on >= 2;
  } catch (const BistritzError&) {
    return false;
  }
}

}  // namespace nhkc
