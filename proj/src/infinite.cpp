#include "nhkc/infinite.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace nhkc {

const char* branch_name(Branch b) {
  switch (b) {
    case Branch::physical: return "physical";
    case Branch::pair_dominant: return "pair_dominant";
    case Branch::pair_subdominant: return "pair_subdominant";
    case Branch::ambiguous: return "ambiguous";
    case Branch::not_on_curve: return "not_on_curve";
  }
  return "?";
}

Branch classify_branch(const BulkSolution& sol, double mod_tol) {
  double m[4];
  for (int i = 0; i < 4; ++i) m[i] = std::abs(sol.pairs[i].x);  // sorted desc
  auto close = [&](int i, int j) {
    return std::abs(m[i] - m[j]) <= mod_tol * std::max(m[i], m[j]);
  };
  const bool e12 = close(0, 1), e23 = close(1, 2), e34 = close(2, 3);
  // all four moduli equal is the generic no-skin configuration and satisfies
  // the physical ordering degenerately; a bare triple is a branch junction
  if (e12 && e23 && e34) return Branch::physical;
  if ((e12 && e23) || (e23 && e34)) return Branch::ambiguous;
  if (e23) return Branch::physical;
  if (e12) return Branch::pair_dominant;
  if (e34) return Branch::pair_subdominant;
  return Branch::not_on_curve;
}

namespace {

// Validate a candidate lambda at angle alpha: locate the root pair with
// ratio e^{+-2 i alpha}, reconstruct (kappa, s), check the quartet, classify.
std::optional<SpectrumPoint> validate_candidate(const ModelParams& p,
                                                double alpha, Complex lambda,
                                                double mod_tol) {
  if (!is_finite(lambda)) return std::nullopt;
  BulkSolution sol;
  try {
    sol = bulk_solve(p, lambda);
  } catch (const std::exception&) {
    return std::nullopt;
  }
  const Complex target = std::polar(1.0, 2.0 * alpha);
  double best_err = std::numeric_limits<double>::infinity();
  int bi = -1, bj = -1;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (i == j) continue;
      const double err = std::abs(sol.pairs[i].x / sol.pairs[j].x - target);
      if (err < best_err) {
        best_err = err;
        bi = i;
        bj = j;
      }
    }
  }
  if (best_err > 1e-5) return std::nullopt;
  const Complex x2 = sol.pairs[bi].x, x3 = sol.pairs[bj].x;
  if (std::abs(std::abs(x2) - std::abs(x3)) >
      10.0 * mod_tol * std::max(std::abs(x2), std::abs(x3)))
    return std::nullopt;

  Complex others[2];
  int k = 0;
  for (int i = 0; i < 4; ++i)
    if (i != bi && i != bj) others[k++] = sol.pairs[i].x;
  if (std::abs(others[0]) < std::abs(others[1])) std::swap(others[0], others[1]);

  const Complex kappa = x2 * std::polar(1.0, -alpha);
  const Complex s = others[0] * kappa;  // |x1| >= |x4| gives |s| >= 1
  const Complex x4 = Complex{1.0} / (s * kappa);
  const double scale = std::max(1.0, std::abs(others[1]));
  if (std::abs(x4 - others[1]) > 1e-6 * scale) return std::nullopt;

  SpectrumPoint pt;
  pt.alpha = alpha;
  pt.lambda = lambda;
  pt.kappa = kappa;
  pt.s = s;
  // classify by the ratio-identified pair: physical when the pair modulus is
  // bracketed by the other two (all four equal is the no-skin case; a bare
  // triple is a junction and stays ambiguous)
  const double pk = std::abs(kappa);
  const double o1 = std::abs(others[0]), o2 = std::abs(others[1]);
  auto close = [&](double a, double b) {
    return std::abs(a - b) <= mod_tol * std::max(a, b);
  };
  const bool c_hi = close(o1, pk), c_lo = close(o2, pk);
  if (c_hi && c_lo)
    pt.branch = Branch::physical;
  else if (c_hi || c_lo)
    pt.branch = Branch::ambiguous;
  else if (pk < o1 && pk > o2)
    pt.branch = Branch::physical;
  else if (pk >= o1)
    pt.branch = Branch::pair_dominant;
  else
    pt.branch = Branch::pair_subdominant;
  return pt;
}

void push_pm(std::vector<Complex>& cands, Complex lambda) {
  cands.push_back(lambda);
  cands.push_back(-lambda);
}

}  // namespace

std::vector<SpectrumPoint> vieta_solutions(const ModelParams& p, double alpha,
                                           double mod_tol) {
  validate(p);
  const auto [t_s, t_d, D2] = derived(p);
  double sc = 0.0;
  for (Complex v : {p.m, p.t1, p.t2, p.d1, p.d2}) sc = std::max(sc, std::abs(v));
  if (std::abs(D2) <= 1e-14 * sc * sc)
    throw std::domain_error("vieta_solutions: D2 = 0 (use the closed-form spectrum)");

  const Complex A = 2.0 * p.m * t_s / D2;
  const double c = 2.0 * std::cos(alpha);
  const double tiny = 1e-12 * std::max(1.0, sc);
  std::vector<Complex> cands;

  if (std::abs(t_d) > tiny) {
    // generic elimination: express s + 1/s through u = kappa + 1/kappa from
    // the first constraint, clear denominators in the remaining two; the
    // compatible u solve a quartic, and each u yields lambda^2
    const Complex ms2 = p.m * p.m + t_s * t_s;
    const Complex td2 = t_d * t_d;
    const Complex g4 = 4.0 * td2 * D2 - 4.0 * c * c * D2 * D2;
    const Complex g3 = 4.0 * A * c * D2 * D2;
    const Complex g2 = 4.0 * td2 * ms2 - 4.0 * td2 * D2 * c * c -
                       A * A * D2 * D2 + 16.0 * c * c * D2 * D2;
    const Complex g1 = 4.0 * td2 * D2 * c * A - 16.0 * A * c * D2 * D2;
    const Complex g0 = 4.0 * A * A * D2 * D2;
    const Polynomial G({g0, g1, g2, g3, g4});
    if (G.degree() >= 1 && G.coeff_scale() > 0.0) {
      for (const Complex& u : roots(G)) {
        if (std::abs(u) < 1e-9) continue;  // kappa = +-i family handled below
        const Complex mu = D2 * (u * u * u - c * c * u + c * A) / u + ms2;
        push_pm(cands, std::sqrt(mu));
      }
    }
  } else {
    // t_d = 0 collapses the second constraint; the kappa = +-1 family (u =
    // +-2) and the s + 1/s = 2 cos(alpha) family cover the solutions
    for (double sig : {1.0, -1.0}) {
      const Complex u{2.0 * sig};
      const Complex v = A / u - c;
      const Complex mu = D2 * (4.0 + c * v) + p.m * p.m + t_s * t_s;
      push_pm(cands, std::sqrt(mu));
    }
    if (std::abs(c) > 1e-12) {
      const Complex u = A / (2.0 * c);
      const Complex mu = D2 * (u * u + c * c) + p.m * p.m + t_s * t_s;
      push_pm(cands, std::sqrt(mu));
    }
  }
  if (std::abs(p.m * t_s) <= 1e-8 * std::max(1.0, sc * sc)) {
    // kappa = +-i family (exists when m t_s = 0): lambda solves a quadratic;
    // the guard is wider than the u ~ 0 skip above so the two hand over
    // cleanly, and validation discards any near-degenerate extras
    for (double sigma : {1.0, -1.0}) {
      const Complex b = Complex{0.0, -1.0} * c * sigma * t_d;
      const Complex disc =
          std::sqrt(b * b + 4.0 * (p.m * p.m + t_s * t_s + c * c * D2));
      cands.push_back((-b + disc) / 2.0);
      cands.push_back((-b - disc) / 2.0);
    }
  }

  std::vector<SpectrumPoint> out;
  for (const Complex& lam : cands) {
    const auto pt = validate_candidate(p, alpha, lam, mod_tol);
    if (!pt) continue;
    bool dup = false;
    for (const auto& q : out)
      if (std::abs(q.lambda - pt->lambda) < 1e-9 * std::max(1.0, std::abs(pt->lambda))) {
        dup = true;
        break;
      }
    if (!dup) out.push_back(*pt);
  }
  return out;
}

SpectrumCurve spectrum_curve(const ModelParams& p, int n_alpha, double mod_tol) {
  if (n_alpha < 8) throw std::invalid_argument("spectrum_curve: n_alpha >= 8");
  SpectrumCurve curve;
  curve.alpha_grid_size = n_alpha;
  for (int i = 0; i < n_alpha; ++i) {
    const double alpha = 2.0 * M_PI * i / n_alpha;
    try {
      auto pts = vieta_solutions(p, alpha, mod_tol);
      curve.points.insert(curve.points.end(), pts.begin(), pts.end());
    } catch (const std::domain_error&) {
      throw;  // D2 = 0 is a caller error, not a per-angle gap
    } catch (const std::exception&) {
      ++curve.failed_alphas;  // gap marker, the sweep continues
    }
  }
  return curve;
}

}  // namespace nhkc
