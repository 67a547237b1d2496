#include "nhkc/finite.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace nhkc {

Matrix assemble_bdg(const ModelParams& p, int L) {
  validate(p);
  if (L < 1) throw std::invalid_argument("assemble_bdg: L >= 1 required");
  Matrix H = Matrix::Zero(2 * L, 2 * L);
  for (int j = 0; j < L; ++j) {
    H(2 * j, 2 * j) = p.m;
    H(2 * j + 1, 2 * j + 1) = -p.m;
  }
  for (int j = 0; j + 1 < L; ++j) {
    H(2 * j, 2 * j + 2) = p.t1;
    H(2 * j, 2 * j + 3) = p.d1;
    H(2 * j + 1, 2 * j + 2) = -p.d2;
    H(2 * j + 1, 2 * j + 3) = -p.t2;
    H(2 * j + 2, 2 * j) = p.t2;
    H(2 * j + 2, 2 * j + 1) = -p.d1;
    H(2 * j + 3, 2 * j) = p.d2;
    H(2 * j + 3, 2 * j + 1) = -p.t1;
  }
  return H;
}

// max over i of min_j |(-v_i) - v_j|, via modulus-sorted windowed search
static double pairing_residual_of(const std::vector<Complex>& vals) {
  const int n = static_cast<int>(vals.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> mods(n);
  for (int i = 0; i < n; ++i) mods[i] = std::abs(vals[i]);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return mods[a] < mods[b]; });
  std::vector<double> sorted_mods(n);
  for (int i = 0; i < n; ++i) sorted_mods[i] = mods[order[i]];

  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const Complex target = -vals[i];
    const double tm = std::abs(target);
    auto it = std::lower_bound(sorted_mods.begin(), sorted_mods.end(), tm);
    int lo = static_cast<int>(it - sorted_mods.begin()), hi = lo - 1;
    double best = std::numeric_limits<double>::infinity();
    // |a - b| >= ||a| - |b||, so widen until the modulus gap exceeds best
    while (true) {
      bool advanced = false;
      if (lo < n && sorted_mods[lo] - tm < best) {
        best = std::min(best, std::abs(target - vals[order[lo]]));
        ++lo;
        advanced = true;
      }
      if (hi >= 0 && tm - sorted_mods[hi] < best) {
        best = std::min(best, std::abs(target - vals[order[hi]]));
        --hi;
        advanced = true;
      }
      if (!advanced) break;
    }
    worst = std::max(worst, best);
  }
  return worst;
}

EigenDecomposition eigensolve(const Matrix& mat, bool want_vectors,
                              double pairing_tol) {
  const int n = static_cast<int>(mat.rows());
  if (n < 2 || mat.cols() != n)
    throw std::invalid_argument("eigensolve: square matrix of size >= 2 required");

  Matrix A = mat;  // zgeev overwrites its input
  std::vector<Complex> w(n);
  Matrix vr;
  if (want_vectors) vr.resize(n, n);
  const lapack_int info = LAPACKE_zgeev(
      LAPACK_COL_MAJOR, 'N', want_vectors ? 'V' : 'N', n, A.data(), n, w.data(),
      nullptr, 1, want_vectors ? vr.data() : nullptr, want_vectors ? n : 1);
  if (info != 0)
    throw std::runtime_error("eigensolve: zgeev failed to converge (info = " +
                             std::to_string(info) + ")");

  EigenDecomposition out;
  out.values = std::move(w);
  if (want_vectors) out.vectors = std::move(vr);
  out.pairing_residual = pairing_residual_of(out.values);
  double max_abs = 0.0;
  for (const Complex& v : out.values) max_abs = std::max(max_abs, std::abs(v));
  out.precision_flag = (out.pairing_residual > pairing_tol * max_abs)
                           ? Precision::suspect
                           : Precision::trusted;
  return out;
}

std::vector<Complex> spectrum_closed_form_d1d2_zero(const ModelParams& p, int L) {
  validate(p);
  if (L < 1) throw std::invalid_argument("L >= 1 required");
  double sc = 0.0;
  for (Complex c : {p.m, p.t1, p.t2, p.d1, p.d2}) sc = std::max(sc, std::abs(c));
  if (std::abs(p.d1 * p.d2) > 1e-12 * sc * sc)
    throw std::domain_error("spectrum_closed_form_d1d2_zero: requires d1 d2 = 0");
  const Complex hop = 2.0 * std::sqrt(p.t1) * std::sqrt(p.t2);
  std::vector<Complex> out;
  out.reserve(2 * L);
  for (int j = 1; j <= L; ++j) {
    const Complex band = hop * std::cos(j * M_PI / (L + 1));
    out.push_back(p.m + band);
    out.push_back(-p.m + band);
  }
  return out;
}

Complex sine_ratio(int L, Complex x) {
  if (L < 1) throw std::invalid_argument("sine_ratio: L >= 1 required");
  if (std::abs(x) == 0.0) throw std::invalid_argument("sine_ratio: x = 0");
  // closed form (x^L - x^{-L}) / (x - 1/x) away from x = +-1
  if (std::abs(x - Complex{1.0}) > 1e-7 && std::abs(x + Complex{1.0}) > 1e-7) {
    const Complex xi = Complex{1.0} / x;
    return (std::pow(x, L) - std::pow(xi, L)) / (x - xi);
  }
  Complex sum{0.0};
  Complex term = std::pow(x, 1 - L);
  const Complex x2 = x * x;
  for (int j = 0; j < L; ++j, term *= x2) sum += term;
  return sum;
}

// splits the quartet into two reciprocal pairs (x y = 1); throws when no
// pairing matches
static std::pair<Complex, Complex> reciprocal_pair_representatives(
    const BulkSolution& sol) {
  const auto& x = sol.pairs;
  constexpr int combos[3][4] = {{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}};
  double best_err = std::numeric_limits<double>::infinity();
  int best = -1;
  for (int c = 0; c < 3; ++c) {
    const double err = std::abs(x[combos[c][0]].x * x[combos[c][1]].x - 1.0) +
                       std::abs(x[combos[c][2]].x * x[combos[c][3]].x - 1.0);
    if (err < best_err) {
      best_err = err;
      best = c;
    }
  }
  if (best_err > 1e-6)
    throw std::runtime_error(
        "deteqn_residual: root quartet is not two reciprocal pairs");
  return {x[combos[best][0]].x, x[combos[best][2]].x};
}

std::pair<Complex, Complex> deteqn_residual(const ModelParams& p, int L,
                                            Complex lambda) {
  const auto [t_s, t_d, D2] = derived(p);
  if (std::abs(t_d) > 1e-10 * (std::abs(p.t1) + std::abs(p.t2)))
    throw std::invalid_argument("deteqn_residual: requires t1 = t2");
  const BulkSolution sol = bulk_solve(p, lambda);
  const auto [x, y] = reciprocal_pair_representatives(sol);

  const Complex t = p.t1;
  const Complex r12 =
      (x + 1.0 / x) + (y + 1.0 / y) - 2.0 * p.m * t / (p.d1 * p.d2 - t * t);

  const Complex head = (p.d1 * p.d2 - t * t) * sine_ratio(L + 1, x) * sine_ratio(L + 1, y);
  Complex sum = head;
  double scale = std::abs(head);
  for (int j = 1; j <= L; ++j) {
    const Complex term =
        4.0 * p.d1 * p.d2 * static_cast<double>(L + 1 - j) * sine_ratio(j, x) * sine_ratio(j, y);
    sum += term;
    scale = std::max(scale, std::abs(term));
  }
  const Complex r14 = scale > 0.0 ? sum / scale : sum;
  return {r12, r14};
}

Complex deteqn_summed_form(const ModelParams& p, int L, Complex alpha,
                           Complex beta) {
  const Complex ca = std::cos(alpha), cb = std::cos(beta);
  const double sc = std::max({std::abs(ca), std::abs(cb), 1.0});
  if (std::abs(ca - cb) < 1e-7 * sc)
    throw std::domain_error(
        "deteqn_summed_form: cos(alpha) = cos(beta) is a removable singularity; "
        "use the term-by-term determinant sum");
  const Complex I{0.0, 1.0};
  const Complex x = std::exp(I * alpha), y = std::exp(I * beta);
  const Complex t = p.t1;
  const Complex dd = p.d1 * p.d2;
  return (dd - t * t) * sine_ratio(L + 1, x) * sine_ratio(L + 1, y) +
         dd / ((ca - cb) * (ca - cb)) *
             (2.0 - 2.0 * sine_ratio(L + 1, x) * sine_ratio(L + 1, y) +
              sine_ratio(L + 2, x) * sine_ratio(L, y) +
              sine_ratio(L, x) * sine_ratio(L + 2, y));
}

LocalizationReport localization(const Vector& vec, int L, double rate_threshold,
                                double quality_threshold) {
  if (vec.size() != 2 * L)
    throw std::invalid_argument("localization: vector length must be 2L");
  if (vec.norm() == 0.0) throw std::invalid_argument("localization: zero vector");

  LocalizationReport rep;
  std::vector<double> site_amp(L), site_mass(L);
  for (int j = 0; j < L; ++j) {
    const double a1 = std::abs(vec(2 * j)), a2 = std::abs(vec(2 * j + 1));
    site_amp[j] = std::max(a1, a2);
    site_mass[j] = a1 * a1 + a2 * a2;
  }
  const double total = std::accumulate(site_mass.begin(), site_mass.end(), 0.0);
  const int edge = (L + 9) / 10;  // first/last 10% of sites
  for (int j = 0; j < edge; ++j) rep.boundary_mass_left += site_mass[j];
  for (int j = L - edge; j < L; ++j) rep.boundary_mass_right += site_mass[j];
  rep.boundary_mass_left /= total;
  rep.boundary_mass_right /= total;

  // least-squares fit of log(amplitude) vs site index
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int npts = 0;
  for (int j = 0; j < L; ++j) {
    if (site_amp[j] <= 0.0) continue;
    const double xj = j + 1, yj = std::log(site_amp[j]);
    sx += xj; sy += yj; sxx += xj * xj; sxy += xj * yj;
    ++npts;
  }
  if (npts >= 2) {
    const double denom = npts * sxx - sx * sx;
    const double slope = (npts * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / npts;
    double ss_res = 0, ss_tot = 0;
    const double mean = sy / npts;
    for (int j = 0; j < L; ++j) {
      if (site_amp[j] <= 0.0) continue;
      const double yj = std::log(site_amp[j]);
      const double fit = slope * (j + 1) + intercept;
      ss_res += (yj - fit) * (yj - fit);
      ss_tot += (yj - mean) * (yj - mean);
    }
    rep.decay_fit_rate = slope;
    rep.fit_quality = ss_tot > 0.0 ? std::max(0.0, 1.0 - ss_res / ss_tot) : 1.0;
  }
  if (rep.fit_quality > quality_threshold && std::abs(rep.decay_fit_rate) > rate_threshold)
    rep.verdict = rep.decay_fit_rate < 0 ? LocalizationVerdict::skin_left
                                         : LocalizationVerdict::skin_right;
  else
    rep.verdict = LocalizationVerdict::extended;
  return rep;
}

}  // namespace nhkc
