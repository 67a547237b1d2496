// Command-line front door: parameter parsing, sweep orchestration and
// machine-readable CSV/JSON outputs.
#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "nhkc/bistritz.hpp"
#include "nhkc/complex_io.hpp"
#include "nhkc/finite.hpp"
#include "nhkc/infinite.hpp"
#include "nhkc/model.hpp"
#include "nhkc/skin.hpp"
#include "nhkc/zeromode.hpp"

using json = nlohmann::ordered_json;
using namespace nhkc;

namespace {

constexpr int kExitInvalidConfig = 2;
constexpr int kExitNumericalFailure = 3;

struct RunConfig {
  std::string m = "0", t1 = "1", t2 = "1", d1 = "0", d2 = "0";
  int L = 0;            // 0 = unset
  int n_alpha = 1000;   // default grid of the angle sweep
  int n_k = 1000;
  int state_L = 0;      // zero-mode --state
  double tol_modulus = 1e-6;
  double tol_pairing = 1e-6;
  std::string out;
  std::string format = "csv";
  std::string coeffs;  // bistritz subcommand

  ModelParams params() const {
    return {parse_complex(m), parse_complex(t1), parse_complex(t2),
            parse_complex(d1), parse_complex(d2)};
  }

  json echo(const std::string& command) const {
    json j;
    j["command"] = command;
    j["m"] = m;
    j["t1"] = t1;
    j["t2"] = t2;
    j["d1"] = d1;
    j["d2"] = d2;
    if (L > 0) j["L"] = L;
    j["n_alpha"] = n_alpha;
    j["n_k"] = n_k;
    if (state_L > 0) j["state"] = state_L;
    j["tolerances"] = {{"modulus", tol_modulus}, {"pairing", tol_pairing}};
    j["format"] = format;
    return j;
  }
};

void load_config_file(const std::string& path, RunConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--config", "cannot open " + path);
  json j;
  in >> j;
  auto str = [&](const char* key, std::string& dst) {
    if (j.contains(key)) dst = j[key].get<std::string>();
  };
  str("m", cfg.m);
  str("t1", cfg.t1);
  str("t2", cfg.t2);
  str("d1", cfg.d1);
  str("d2", cfg.d2);
  if (j.contains("L")) cfg.L = j["L"].get<int>();
  if (j.contains("n_alpha")) cfg.n_alpha = j["n_alpha"].get<int>();
  if (j.contains("n_k")) cfg.n_k = j["n_k"].get<int>();
  if (j.contains("state")) cfg.state_L = j["state"].get<int>();
  if (j.contains("format")) cfg.format = j["format"].get<std::string>();
  if (j.contains("out")) cfg.out = j["out"].get<std::string>();
  if (j.contains("tolerances")) {
    const auto& t = j["tolerances"];
    if (t.contains("modulus")) cfg.tol_modulus = t["modulus"].get<double>();
    if (t.contains("pairing")) cfg.tol_pairing = t["pairing"].get<double>();
  }
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write output file: " + path);
  return f;
}

void write_csv_header(std::ostream& os, const RunConfig& cfg,
                      const std::string& command, const std::string& columns) {
  os << "# config: " << cfg.echo(command).dump() << "\n" << columns << "\n";
}

// ---------------------------------------------------------------------------
// subcommands
// ---------------------------------------------------------------------------

int cmd_periodic(const RunConfig& cfg) {
  const ModelParams p = cfg.params();
  if (cfg.format == "json") {
    json j = cfg.echo("periodic");
    auto& rows = j["curve"] = json::array();
    for (int i = 0; i < cfg.n_k; ++i) {
      const double k = cfg.n_k == 1 ? 0.0 : 2.0 * M_PI * i / cfg.n_k;
      const auto [lp, lm] = periodic_lambda(p, k);
      rows.push_back({{"k", k},
                      {"re_lambda_plus", lp.real()},
                      {"im_lambda_plus", lp.imag()},
                      {"re_lambda_minus", lm.real()},
                      {"im_lambda_minus", lm.imag()}});
    }
    auto f = open_out(cfg.out);
    f << j.dump(2) << "\n";
    return 0;
  }
  std::ostringstream body;
  for (int i = 0; i < cfg.n_k; ++i) {
    const double k = cfg.n_k == 1 ? 0.0 : 2.0 * M_PI * i / cfg.n_k;
    const auto [lp, lm] = periodic_lambda(p, k);
    body << format_double(k) << ',' << format_double(lp.real()) << ','
         << format_double(lp.imag()) << ',' << format_double(lm.real()) << ','
         << format_double(lm.imag()) << "\n";
  }
  auto f = open_out(cfg.out);
  write_csv_header(f, cfg, "periodic",
                   "k,re_lambda_plus,im_lambda_plus,re_lambda_minus,im_lambda_minus");
  f << body.str();
  return 0;
}

int cmd_finite(const RunConfig& cfg, const std::string& localization_out,
               const std::string& vector_out, const std::string& vector_near) {
  if (cfg.L < 1) throw CLI::ValidationError("--L", "finite requires --L >= 1");
  const ModelParams p = cfg.params();
  const Matrix H = assemble_bdg(p, cfg.L);
  const bool want_vectors = !localization_out.empty() || !vector_out.empty();
  const EigenDecomposition ed = eigensolve(H, want_vectors, cfg.tol_pairing);

  json header = cfg.echo("finite");
  header["pairing_residual"] = ed.pairing_residual;
  header["precision_flag"] =
      ed.precision_flag == Precision::trusted ? "trusted" : "suspect";

  if (cfg.format == "json") {
    json j = header;
    auto& vals = j["eigenvalues"] = json::array();
    for (const Complex& v : ed.values)
      vals.push_back({{"re", v.real()}, {"im", v.imag()}});
    auto f = open_out(cfg.out);
    f << j.dump(2) << "\n";
  } else {
    auto f = open_out(cfg.out);
    f << "# " << header.dump() << "\nre_lambda,im_lambda\n";
    for (const Complex& v : ed.values)
      f << format_double(v.real()) << ',' << format_double(v.imag()) << "\n";
  }

  if (!localization_out.empty()) {
    auto f = open_out(localization_out);
    write_csv_header(f, cfg, "finite",
                     "re_lambda,im_lambda,decay_fit_rate,fit_quality,"
                     "boundary_mass_left,boundary_mass_right,verdict");
    for (size_t i = 0; i < ed.values.size(); ++i) {
      const LocalizationReport rep =
          localization(ed.vectors->col(static_cast<int>(i)), cfg.L);
      const char* verdict = rep.verdict == LocalizationVerdict::skin_left
                                ? "skin_left"
                                : rep.verdict == LocalizationVerdict::skin_right
                                      ? "skin_right"
                                      : "extended";
      f << format_double(ed.values[i].real()) << ','
        << format_double(ed.values[i].imag()) << ','
        << format_double(rep.decay_fit_rate) << ','
        << format_double(rep.fit_quality) << ','
        << format_double(rep.boundary_mass_left) << ','
        << format_double(rep.boundary_mass_right) << ',' << verdict << "\n";
    }
  }

  if (!vector_out.empty()) {
    const Complex target = parse_complex(vector_near);
    size_t best = 0;
    for (size_t i = 1; i < ed.values.size(); ++i)
      if (std::abs(ed.values[i] - target) < std::abs(ed.values[best] - target))
        best = i;
    auto f = open_out(vector_out);
    write_csv_header(f, cfg, "finite", "site,amp_component_1,amp_component_2");
    const auto col = ed.vectors->col(static_cast<int>(best));
    for (int j = 0; j < cfg.L; ++j)
      f << (j + 1) << ',' << format_double(std::abs(col(2 * j))) << ','
        << format_double(std::abs(col(2 * j + 1))) << "\n";
  }
  return 0;
}

int cmd_infinite(const RunConfig& cfg) {
  const ModelParams p = cfg.params();
  const SpectrumCurve curve = spectrum_curve(p, cfg.n_alpha, cfg.tol_modulus);
  if (cfg.format == "json") {
    json j = cfg.echo("infinite");
    for (Branch b : {Branch::physical, Branch::pair_dominant, Branch::pair_subdominant}) {
      auto& rows = j[branch_name(b)] = json::array();
      for (const SpectrumPoint& pt : curve.points) {
        if (pt.branch != b) continue;
        rows.push_back({{"alpha", pt.alpha},
                        {"re_lambda", pt.lambda.real()},
                        {"im_lambda", pt.lambda.imag()},
                        {"abs_kappa", std::abs(pt.kappa)},
                        {"abs_s", std::abs(pt.s)}});
      }
    }
    auto f = open_out(cfg.out);
    f << j.dump(2) << "\n";
    return 0;
  }
  const std::filesystem::path base(cfg.out);
  const auto stem = (base.parent_path() / base.stem()).string();
  const auto ext = base.extension().empty() ? ".csv" : base.extension().string();
  for (Branch b : {Branch::physical, Branch::pair_dominant, Branch::pair_subdominant}) {
    auto f = open_out(stem + "_" + branch_name(b) + ext);
    write_csv_header(f, cfg, "infinite",
                     "alpha,re_lambda,im_lambda,branch,abs_kappa,abs_s");
    for (const SpectrumPoint& pt : curve.points) {
      if (pt.branch != b) continue;
      f << format_double(pt.alpha) << ',' << format_double(pt.lambda.real())
        << ',' << format_double(pt.lambda.imag()) << ',' << branch_name(b) << ','
        << format_double(std::abs(pt.kappa)) << ','
        << format_double(std::abs(pt.s)) << "\n";
    }
  }
  if (curve.failed_alphas > 0)
    std::cerr << "infinite: " << curve.failed_alphas << " angle(s) left as gaps\n";
  return 0;
}

int cmd_zero_mode(const RunConfig& cfg) {
  const ModelParams p = cfg.params();
  json j = cfg.echo("zero-mode");
  try {
    const ZeroModeVerdict v = has_zero_mode(p);
    j["exists"] = v.exists;
    j["side"] = v.side == ZeroModeSide::plus_branch    ? "plus_branch"
                : v.side == ZeroModeSide::minus_branch ? "minus_branch"
                                                       : "none";
    j["lhs"] = v.lhs;
    j["rhs"] = v.rhs;
    j["boundary"] = v.boundary;
  } catch (const std::domain_error& e) {
    j["error"] = e.what();
    auto f = open_out(cfg.out);
    f << j.dump(2) << "\n";
    return kExitNumericalFailure;
  }
  auto f = open_out(cfg.out);
  f << j.dump(2) << "\n";

  if (cfg.state_L > 0) {
    const Vector psi = zero_mode_state(p, cfg.state_L);
    const std::filesystem::path base(cfg.out);
    auto s = open_out((base.parent_path() / base.stem()).string() + "_state.csv");
    write_csv_header(s, cfg, "zero-mode", "site,amp_component_1,amp_component_2");
    for (int jx = 0; jx < cfg.state_L; ++jx)
      s << (jx + 1) << ',' << format_double(std::abs(psi(2 * jx))) << ','
        << format_double(std::abs(psi(2 * jx + 1))) << "\n";
  }
  return 0;
}

int cmd_skin(const RunConfig& cfg) {
  const ModelParams p = cfg.params();
  if (cfg.format == "json") {
    json j = cfg.echo("skin");
    auto& rows = j["verdicts"] = json::array();
    for (int i = 0; i < cfg.n_k; ++i) {
      const double k = 2.0 * M_PI * i / cfg.n_k;
      for (int sign : {+1, -1}) {
        try {
          const SkinVerdict v = classify_skin(p, k, sign);
          json row{{"k", k},
                   {"re_lambda", v.lambda.real()},
                   {"im_lambda", v.lambda.imag()}};
          if (v.special_point) {
            row["special_point"] = true;
          } else {
            row["on_circle_count"] = v.on_circle_count;
            row["skin"] = v.skin;
          }
          if (v.matched_condition) row["matched_condition"] = *v.matched_condition;
          rows.push_back(std::move(row));
        } catch (const std::exception& e) {
          rows.push_back({{"k", k}, {"error", e.what()}});
        }
      }
    }
    auto& conds = j["no_skin_conditions"] = json::array();
    for (const NoSkinCondition& c : no_skin_conditions(p))
      conds.push_back({{"label", c.label},
                       {"k_range", c.all_k ? "forall k" : c.k_range_text}});
    auto f = open_out(cfg.out);
    f << j.dump(2) << "\n";
    return 0;
  }
  auto f = open_out(cfg.out);
  write_csv_header(f, cfg, "skin",
                   "k,re_lambda,im_lambda,on_circle_count,skin,matched_condition");
  for (int i = 0; i < cfg.n_k; ++i) {
    const double k = 2.0 * M_PI * i / cfg.n_k;
    for (int sign : {+1, -1}) {
      try {
        const SkinVerdict v = classify_skin(p, k, sign);
        f << format_double(k) << ',' << format_double(v.lambda.real()) << ','
          << format_double(v.lambda.imag()) << ',';
        if (v.special_point)
          f << "-1,special_point,";
        else
          f << v.on_circle_count << ',' << (v.skin ? "true" : "false") << ',';
        f << v.matched_condition.value_or("") << "\n";
      } catch (const std::exception& e) {
        f << format_double(k) << ",,,," << "error," << e.what() << "\n";
      }
    }
  }
  const std::filesystem::path base(cfg.out);
  auto s = open_out((base.parent_path() / base.stem()).string() + "_conditions.json");
  json j = cfg.echo("skin");
  auto& rows = j["no_skin_conditions"] = json::array();
  for (const NoSkinCondition& c : no_skin_conditions(p)) {
    json row;
    row["label"] = c.label;
    row["k_range"] = c.all_k ? "forall k" : c.k_range_text;
    rows.push_back(row);
  }
  s << j.dump(2) << "\n";
  return 0;
}

int cmd_bistritz(const RunConfig& cfg) {
  std::vector<Complex> coeffs;
  std::stringstream ss(cfg.coeffs);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) coeffs.push_back(parse_complex(tok));
  if (coeffs.size() < 2)
    throw CLI::ValidationError("--coeffs", "need at least two coefficients (ascending degree)");
  const BistritzOutcome o = bistritz(Polynomial(coeffs));
  json j;
  j["degree"] = o.n;
  j["inside"] = o.inside;
  j["on"] = o.on;
  j["outside"] = o.outside;
  j["nu_n"] = o.nu_n;
  if (o.nu_s) j["nu_s"] = *o.nu_s;
  if (o.singular_level) j["singular_level"] = *o.singular_level;
  j["ambiguous_signs"] = o.ambiguous_signs;
  if (cfg.out.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    auto f = open_out(cfg.out);
    f << j.dump(2) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectra of the open non-hermitian Kitaev chain"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string config_path;
  std::string localization_out, vector_out, vector_near = "0";

  // the config file provides defaults, flags override: load it before the
  // flag parse writes on top of cfg
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--config") {
      try {
        load_config_file(argv[i + 1], cfg);
      } catch (const std::exception& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return kExitInvalidConfig;
      }
      break;
    }
  }

  auto add_common = [&](CLI::App* sub, bool needs_out) {
    sub->add_option("--config", config_path, "flat JSON config; flags override")
        ->check(CLI::ExistingFile);
    sub->add_option("--m", cfg.m, "onsite term (complex literal, e.g. 2+1i)");
    sub->add_option("--t1", cfg.t1, "right hopping");
    sub->add_option("--t2", cfg.t2, "left hopping");
    sub->add_option("--d1", cfg.d1, "pairing amplitude");
    sub->add_option("--d2", cfg.d2, "pairing amplitude");
    sub->add_option("--n-alpha", cfg.n_alpha, "angle grid size")->check(CLI::Range(8, 100000000));
    sub->add_option("--n-k", cfg.n_k, "momentum grid size")->check(CLI::PositiveNumber);
    sub->add_option("--tol-modulus", cfg.tol_modulus, "equal-modulus tolerance");
    sub->add_option("--tol-pairing", cfg.tol_pairing, "pairing-residual tolerance");
    sub->add_option("--format", cfg.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    auto* out = sub->add_option("--out", cfg.out, "output path");
    if (needs_out) out->required();
  };

  auto* periodic = app.add_subcommand("periodic", "periodic dispersion curve");
  add_common(periodic, true);

  auto* finite = app.add_subcommand("finite", "finite-chain spectrum");
  add_common(finite, true);
  finite->add_option("--L", cfg.L, "chain length")->check(CLI::PositiveNumber);
  finite->add_option("--localization-out", localization_out,
                     "per-state localization report CSV");
  finite->add_option("--vector-out", vector_out, "eigenvector CSV");
  finite->add_option("--vector-near", vector_near,
                     "eigenvalue selecting the eigenvector (complex literal)");

  auto* infinite = app.add_subcommand("infinite", "infinite-size eigenvalue curves");
  add_common(infinite, true);

  auto* zero = app.add_subcommand("zero-mode", "zero-mode criterion verdict");
  add_common(zero, true);
  zero->add_option("--state", cfg.state_L, "also emit the zero-mode state at this L")
      ->check(CLI::PositiveNumber);

  auto* skin = app.add_subcommand("skin", "per-momentum skin-effect classification");
  add_common(skin, true);

  auto* bist = app.add_subcommand("bistritz", "unit-circle root counts");
  bist->add_option("--coeffs", cfg.coeffs,
                   "comma-separated complex coefficients, ascending degree")
      ->required();
  bist->add_option("--out", cfg.out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalidConfig;
  }

  try {
    if (periodic->parsed()) return cmd_periodic(cfg);
    if (finite->parsed()) return cmd_finite(cfg, localization_out, vector_out, vector_near);
    if (infinite->parsed()) return cmd_infinite(cfg);
    if (zero->parsed()) return cmd_zero_mode(cfg);
    if (skin->parsed()) return cmd_skin(cfg);
    if (bist->parsed()) return cmd_bistritz(cfg);
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kExitInvalidConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kExitInvalidConfig;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumericalFailure;
  }
  return 0;
}
