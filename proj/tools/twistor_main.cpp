// twistor: command-line front end for the beta-map pipeline.
//
// Subcommands: flow, xray, normal, beta, verify-bds, oracle-compare.
// Every run reads one INI-style config (sections in brackets, key = value,
// '#' comments); --out, --threads and --seed override the [run] section.
// Exit codes: 0 ok, 2 certificate failure, 3 numerical failure, 4 config
// or input error.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "twistor/bds.hpp"
#include "twistor/beta.hpp"
#include "twistor/errors.hpp"
#include "twistor/expr.hpp"
#include "twistor/flow.hpp"
#include "twistor/grid.hpp"
#include "twistor/io_format.hpp"
#include "twistor/normal.hpp"
#include "twistor/oracles.hpp"
#include "twistor/parallel.hpp"
#include "twistor/xray.hpp"

namespace fs = std::filesystem;
using namespace twistor;

namespace {

// ---- config ----------------------------------------------------------------

using Section = std::map<std::string, std::string>;

struct Config {
  std::map<std::string, Section> sections;

  bool has(const std::string& sec, const std::string& key) const {
    auto s = sections.find(sec);
    return s != sections.end() && s->second.count(key) > 0;
  }
  std::string str(const std::string& sec, const std::string& key,
                  const std::string& fallback = "") const {
    auto s = sections.find(sec);
    if (s == sections.end()) return fallback;
    auto k = s->second.find(key);
    return k == s->second.end() ? fallback : k->second;
  }
  double num(const std::string& sec, const std::string& key, double fallback) const {
    const std::string v = str(sec, key);
    if (v.empty()) return fallback;
    try {
      size_t used = 0;
      const double d = std::stod(v, &used);
      while (used < v.size() && std::isspace((unsigned char)v[used])) ++used;
      if (used != v.size()) throw std::invalid_argument(v);
      return d;
    } catch (const std::exception&) {
      throw ConfigError("config: [" + sec + "] " + key + " = '" + v + "' is not a number");
    }
  }
  long integer(const std::string& sec, const std::string& key, long fallback) const {
    const double d = num(sec, key, (double)fallback);
    const long v = (long)std::llround(d);
    if (std::abs(d - (double)v) > 1e-9)
      throw ConfigError("config: [" + sec + "] " + key + " must be an integer");
    return v;
  }
  bool flag(const std::string& sec, const std::string& key, bool fallback) const {
    std::string v = str(sec, key);
    if (v.empty()) return fallback;
    for (auto& c : v) c = (char)std::tolower((unsigned char)c);
    if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
    if (v == "0" || v == "false" || v == "no" || v == "off") return false;
    throw ConfigError("config: [" + sec + "] " + key + " = '" + v + "' is not a boolean");
  }
};

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace((unsigned char)s[a])) ++a;
  while (b > a && std::isspace((unsigned char)s[b - 1])) --b;
  return s.substr(a, b - a);
}

Config parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  Config cfg;
  std::string line, section = "run";
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config: unterminated section header at line " +
                          std::to_string(lineno));
      section = trim(line.substr(1, line.size() - 2));
      cfg.sections[section];  // allow empty sections
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: expected key = value at line " + std::to_string(lineno));
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("config: empty key at line " + std::to_string(lineno));
    cfg.sections[section][key] = val;
  }
  return cfg;
}

ConformalMetric metric_from_config(const Config& cfg) {
  const std::string kind = cfg.str("metric", "kind", "euclidean");
  const double R = cfg.num("metric", "R", 1.0);
  if (kind == "euclidean") return euclidean_metric(R);
  if (kind == "constant_curvature" || kind == "cc")
    return constant_curvature_metric(cfg.num("metric", "kappa", 0.0), R);
  if (kind == "custom") {
    const std::string expr = cfg.str("metric", "sigma_expr");
    if (expr.empty()) throw ConfigError("config: [metric] custom needs sigma_expr");
    return metric_from_expr(expr, R, cfg.flag("metric", "rotational", false));
  }
  throw ConfigError("config: unknown metric kind '" + kind + "'");
}

GridSpec grid_from_config(const Config& cfg) {
  GridSpec g;
  g.n_r = (int)cfg.integer("grid", "n_r", g.n_r);
  g.n_theta = (int)cfg.integer("grid", "n_theta", g.n_theta);
  g.k_max = (int)cfg.integer("grid", "k_max", g.k_max);
  g.quad_nodes = (int)cfg.integer("grid", "quad_nodes", g.quad_nodes);
  g.validate();
  return g;
}

FieldWeight weight_from(const std::string& w, const char* where) {
  if (w == "smooth") return FieldWeight::smooth;
  if (w == "rho_half") return FieldWeight::rho_half;
  throw ConfigError(std::string("config: [") + where + "] weight must be smooth or rho_half");
}

struct RunContext {
  Config cfg;
  fs::path out;
  std::uint64_t seed = 20260822ull;
};

void write_text(const fs::path& p, const std::string& body) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw ConfigError("cannot open '" + p.string() + "' for writing");
  os << body;
  if (!os) throw ConfigError("write failed for '" + p.string() + "'");
}

// ---- subcommands -----------------------------------------------------------

std::vector<BoundaryPoint> parse_points(const std::string& text) {
  // "omega:alpha omega:alpha ..." (whitespace separated)
  std::vector<BoundaryPoint> pts;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    const size_t colon = tok.find(':');
    if (colon == std::string::npos)
      throw ConfigError("config: [flow] points entries look like omega:alpha, got '" + tok +
                        "'");
    try {
      pts.push_back({std::stod(tok.substr(0, colon)), std::stod(tok.substr(colon + 1))});
    } catch (const std::exception&) {
      throw ConfigError("config: [flow] bad point '" + tok + "'");
    }
  }
  return pts;
}

int cmd_flow(const RunContext& rc) {
  const ConformalMetric m = metric_from_config(rc.cfg);
  const auto pts = parse_points(rc.cfg.str("flow", "points", ""));

  {
    std::ofstream os(rc.out / "chords.csv", std::ios::binary);
    if (!os) throw ConfigError("cannot write chords.csv");
    csv_header(os, {"point", "t", "x", "y", "theta"});
    for (size_t i = 0; i < pts.size(); ++i) {
      const GeodesicRecord rec = chord(m, pts[i]);
      for (size_t s = 0; s < rec.t.size(); ++s)
        csv_row(os, {(double)i, rec.t[s], rec.state[s].z.real(), rec.state[s].z.imag(),
                     rec.state[s].theta});
    }
  }

  const int n_scatter = (int)rc.cfg.integer("flow", "n_scatter", 33);
  const double amax = rc.cfg.num("flow", "alpha_max", 1.3);
  const double omega0 = rc.cfg.num("flow", "omega", 0.0);
  if (n_scatter < 2 || amax <= 0.0 || amax >= 0.5 * M_PI)
    throw ConfigError("config: [flow] n_scatter >= 2 and 0 < alpha_max < pi/2 required");
  {
    std::ofstream os(rc.out / "scattering.csv", std::ios::binary);
    if (!os) throw ConfigError("cannot write scattering.csv");
    csv_header(os, {"omega", "alpha", "omega_out", "alpha_out"});
    for (int i = 0; i < n_scatter; ++i) {
      const double alpha = -amax + 2.0 * amax * i / (n_scatter - 1);
      const BoundaryPoint outp = scattering(m, {omega0, alpha});
      csv_row(os, {omega0, alpha, outp.omega, outp.alpha});
    }
  }
  std::cout << "flow: wrote chords.csv (" << pts.size() << " points), scattering.csv ("
            << n_scatter << " rows)\n";
  return 0;
}

int cmd_xray(const RunContext& rc) {
  const ConformalMetric m = metric_from_config(rc.cfg);
  const GridSpec spec = grid_from_config(rc.cfg);
  const PolarGrid g = polar_grid(m, spec);

  const int k = (int)rc.cfg.integer("xray", "k", 0);
  const Expr ex = Expr::parse(rc.cfg.str("xray", "expr", "1"));
  const FieldWeight w = weight_from(rc.cfg.str("xray", "weight", "rho_half"), "xray");
  const ModeField a = sample_single_mode(g, k, [&](cplx z) { return ex.eval(z); }, w);

  const BoundaryGrid bg = boundary_grid(spec);
  const BoundaryField h = xray_boundary(m, a, bg, spec.quad_nodes);

  std::ofstream os(rc.out / "xray.csv", std::ios::binary);
  if (!os) throw ConfigError("cannot write xray.csv");
  csv_header(os, {"omega", "alpha", "re", "im"});
  for (int ia = 0; ia < bg.n_alpha; ++ia)
    for (int j = 0; j < bg.n_omega; ++j) {
      const cplx v = h.at(ia, j);
      csv_row(os, {bg.omega(j), bg.alpha(ia), v.real(), v.imag()});
    }
  std::cout << "xray: wrote xray.csv (" << bg.size() << " samples, mode " << k << ")\n";
  return 0;
}

int cmd_normal(const RunContext& rc) {
  const ConformalMetric m = metric_from_config(rc.cfg);
  const GridSpec spec = grid_from_config(rc.cfg);
  const PolarGrid g = polar_grid(m, spec);

  const std::string op = rc.cfg.str("normal", "op", "apply");
  const int k = (int)rc.cfg.integer("normal", "k", 0);
  const Expr ex = Expr::parse(rc.cfg.str("normal", "expr", "1"));

  double residual = 0.0;
  ModeField out;
  if (op == "apply") {
    const FieldWeight w = weight_from(rc.cfg.str("normal", "weight", "rho_half"), "normal");
    const ModeField a = sample_single_mode(g, k, [&](cplx z) { return ex.eval(z); }, w);
    out = normal_Nk(m, k, a, spec.n_theta, spec.quad_nodes);
  } else if (op == "solve") {
    // rhs is a smooth field; the solution comes back as the rho^{-1/2}
    // smooth factor
    const ModeField rhs =
        sample_single_mode(g, k, [&](cplx z) { return ex.eval(z); }, FieldWeight::smooth);
    const double reg = rc.cfg.num("run", "reg", -1.0);
    out = solve_normal(m, k, rhs, reg);
    // recover the reported roundtrip residual for the summary
    const ModeField back = normal_Nk(m, k, out, spec.n_theta, spec.quad_nodes);
    double num = 0.0, den = 0.0;
    for (int n = 0; n < g.size(); ++n) {
      num += std::norm(back.coeffs[0][(size_t)n] - rhs.coeffs[0][(size_t)n]);
      den += std::norm(rhs.coeffs[0][(size_t)n]);
    }
    residual = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
  } else {
    throw ConfigError("config: [normal] op must be apply or solve");
  }

  std::ofstream os(rc.out / "normal.csv", std::ios::binary);
  if (!os) throw ConfigError("cannot write normal.csv");
  csv_header(os, {"r", "phi", "re", "im"});
  for (int i = 0; i < g.n_r; ++i)
    for (int j = 0; j < g.n_theta; ++j) {
      const cplx v = out.coeffs[0][(size_t)g.index(i, j)];
      csv_row(os, {g.radius(i), g.angle(j), v.real(), v.imag()});
    }

  JsonEmitter je;
  je.obj()
      .field("op", op)
      .field("k", k)
      .field("weight", out.weight == FieldWeight::rho_half ? "rho_half" : "smooth")
      .field("roundtrip_residual", residual)
      .close();
  write_text(rc.out / "normal_summary.json", je.take() + "\n");
  std::cout << "normal: wrote normal.csv, normal_summary.json (op " << op << ", mode " << k
            << ")\n";
  return 0;
}

void mode_norms(JsonEmitter& je, const TwistorMap& map, int comp) {
  je.key(comp == 0 ? "component0_modes" : "component1_modes").arr();
  for (int k = comp; k <= map.k_max; k += 2) {
    if (!map.has_mode(comp, k)) continue;
    double sup = 0.0;
    for (const cplx& v : map.mode(comp, k)) sup = std::max(sup, std::abs(v));
    je.obj().field("k", k).field("sup", sup).close();
  }
  je.close();
}

int cmd_beta(const RunContext& rc) {
  const ConformalMetric m = metric_from_config(rc.cfg);
  const GridSpec spec = grid_from_config(rc.cfg);
  BetaOptions opt;
  opt.reg = rc.cfg.num("run", "reg", -1.0);
  opt.force_generic = rc.cfg.flag("beta", "force_generic", false);

  const TwistorMap map = beta_extension(m, spec, opt);
  save_twistor_map(map, (rc.out / "beta_map.tbm").string());

  JsonEmitter je;
  je.obj()
      .field("n_r", spec.n_r)
      .field("n_theta", spec.n_theta)
      .field("k_max", spec.k_max)
      .field("quad_nodes", spec.quad_nodes)
      .field("solver_residual", map.solver_residual)
      .field("truncation_bound", map.truncation_bound);
  if (m.rotationally_symmetric) je.field("equivariance_defect", equivariance_defect(map));
  mode_norms(je, map, 0);
  mode_norms(je, map, 1);
  je.close();
  write_text(rc.out / "beta_summary.json", je.take() + "\n");
  std::cout << "beta: wrote beta_map.tbm, beta_summary.json (residual "
            << fmt_g17(map.solver_residual) << ")\n";
  return 0;
}

BdsThresholds thresholds_from_config(const Config& cfg, const ConformalMetric& m,
                                     const GridSpec& spec, int n_pairs, std::uint64_t seed) {
  BdsThresholds th = default_thresholds(m, spec, n_pairs, seed);
  th.min_abs_det_S = cfg.num("verify", "min_abs_det_S", th.min_abs_det_S);
  th.min_lambda_min = cfg.num("verify", "min_lambda_min", th.min_lambda_min);
  th.min_injectivity_ratio = cfg.num("verify", "min_injectivity_ratio", th.min_injectivity_ratio);
  th.min_tr_embed_det = cfg.num("verify", "min_tr_embed_det", th.min_tr_embed_det);
  th.holomorphy = cfg.num("verify", "holomorphy", th.holomorphy);
  return th;
}

std::string report_json(const BdsReport& rep) {
  JsonEmitter je;
  je.obj()
      .field("min_abs_det_S", rep.min_abs_det_S)
      .field("min_lambda_min", rep.min_lambda_min)
      .field("min_injectivity_ratio", rep.min_injectivity_ratio)
      .field("min_tr_embed_det", rep.min_tr_embed_det)
      .field("holomorphy_residual", rep.holomorphy_residual)
      .field("det_z", rep.det_z)
      .field("det_mu", rep.det_mu)
      .field("lambda_z", rep.lambda_z)
      .field("lambda_mu", rep.lambda_mu)
      .field("embed_omega", rep.embed_omega)
      .field("embed_alpha", rep.embed_alpha)
      .field("boundary_pair_ratio", rep.boundary_pair_ratio)
      .field("interior_margin", rep.interior_margin);
  je.key("thresholds")
      .obj()
      .field("min_abs_det_S", rep.thresholds.min_abs_det_S)
      .field("min_lambda_min", rep.thresholds.min_lambda_min)
      .field("min_injectivity_ratio", rep.thresholds.min_injectivity_ratio)
      .field("min_tr_embed_det", rep.thresholds.min_tr_embed_det)
      .field("holomorphy", rep.thresholds.holomorphy)
      .close();
  je.field("det_ok", rep.det_ok)
      .field("lambda_ok", rep.lambda_ok)
      .field("injectivity_ok", rep.injectivity_ok)
      .field("embed_ok", rep.embed_ok)
      .field("holomorphy_ok", rep.holomorphy_ok)
      .field("pass", rep.pass)
      .close();
  return je.take() + "\n";
}

int cmd_verify(const RunContext& rc) {
  const std::string path = rc.cfg.str("verify", "map");
  if (path.empty()) throw ConfigError("config: [verify] map = <container path> required");
  const TwistorMap map = load_twistor_map(path);

  // custom metrics lose their callables in serialization; rebuild from the
  // config when one is given, otherwise trust the container header
  ConformalMetric m = map.metric;
  if (m.kind == MetricKind::custom || rc.cfg.has("metric", "kind")) m = metric_from_config(rc.cfg);

  const GridSpec spec = grid_from_config(rc.cfg);
  const int n_pairs = (int)rc.cfg.integer("verify", "n_pairs", 64);
  const BdsThresholds th = thresholds_from_config(rc.cfg, m, spec, n_pairs, rc.seed);
  const BdsReport rep = certify_bds(m, map, spec, &th, n_pairs, rc.seed);

  write_text(rc.out / "bds_report.json", report_json(rep));
  std::cout << "verify-bds: " << (rep.pass ? "PASS" : "FAIL") << " (report in bds_report.json)\n";
  return rep.pass ? 0 : 2;
}

int cmd_oracle_compare(const RunContext& rc) {
  const std::string path = rc.cfg.str("compare", "map");
  if (path.empty()) throw ConfigError("config: [compare] map = <container path> required");
  const TwistorMap map = load_twistor_map(path);

  const double R = map.grid.R;
  const double kappa = rc.cfg.num("compare", "kappa", map.metric.kappa);
  if (std::abs(kappa) * R * R >= 1.0)
    throw ConfigError("config: [compare] kappa outside the simplicity range");
  const CCParams p{kappa, R};
  const double tol = rc.cfg.num("compare", "tol", 5e-3);

  double sup0 = 0.0, sup1 = 0.0;
  for (double rf : {0.15, 0.35, 0.55, 0.75, 0.9})
    for (int ia = 0; ia < 8; ++ia)
      for (double mm : {0.0, 0.35, 0.7, 0.95})
        for (int ip = 0; ip < 8; ++ip) {
          const cplx z = std::polar(rf * R, 2.0 * M_PI * ia / 8.0 + 0.37);
          const cplx mu = std::polar(mm, 2.0 * M_PI * ip / 8.0 + 0.11);
          const auto got = evaluate(map, z, mu);
          const auto want = beta_cc(p, z, mu);
          sup0 = std::max(sup0, std::abs(got.first - want.first));
          sup1 = std::max(sup1, std::abs(got.second - want.second));
        }
  const double sup = std::max(sup0, sup1);

  JsonEmitter je;
  je.obj()
      .field("kappa", kappa)
      .field("R", R)
      .field("sup_err_component0", sup0)
      .field("sup_err_component1", sup1)
      .field("sup_err", sup)
      .field("tol", tol)
      .field("pass", sup <= tol)
      .close();
  write_text(rc.out / "oracle_compare.json", je.take() + "\n");
  std::cout << "oracle-compare: sup error " << fmt_g17(sup) << (sup <= tol ? " <= " : " > ")
            << fmt_g17(tol) << "\n";
  return sup <= tol ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"canonical beta-maps on transport twistor spaces of conformal disks"};
  app.require_subcommand(1);

  std::string config_path, out_override;
  int threads = 0;
  std::int64_t seed_flag = -1;
  app.add_option("--config", config_path, "INI-style run configuration")->required();
  app.add_option("--out", out_override, "output directory (overrides [run] out)");
  app.add_option("--threads", threads, "worker threads, 0 = hardware count");
  app.add_option("--seed", seed_flag, "RNG seed (overrides [run] seed)");

  auto* sub_flow = app.add_subcommand("flow", "integrate chords, tabulate the scattering relation");
  auto* sub_xray = app.add_subcommand("xray", "X-ray transform of a configured mode field");
  auto* sub_normal = app.add_subcommand("normal", "apply or invert the normalized operator");
  auto* sub_beta = app.add_subcommand("beta", "run the full extension pipeline, save the map");
  auto* sub_verify = app.add_subcommand("verify-bds", "certify a saved map");
  auto* sub_compare =
      app.add_subcommand("oracle-compare", "compare a saved map with the closed-form family");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // keep --help at 0, fold every usage error into the config-error code
    const int code = app.exit(e);
    return code == 0 ? 0 : 4;
  }

  try {
    RunContext rc;
    rc.cfg = parse_config(config_path);
    rc.out = out_override.empty() ? fs::path(rc.cfg.str("run", "out", ".")) : fs::path(out_override);
    std::error_code ec;
    fs::create_directories(rc.out, ec);
    if (ec || !fs::is_directory(rc.out))
      throw ConfigError("cannot create output directory '" + rc.out.string() + "'");

    const long cfg_threads = rc.cfg.integer("run", "threads", 0);
    set_thread_count(threads > 0 ? threads : (int)cfg_threads);
    rc.seed = seed_flag >= 0 ? (std::uint64_t)seed_flag
                             : (std::uint64_t)rc.cfg.integer("run", "seed", 20260822L);

    if (sub_flow->parsed()) return cmd_flow(rc);
    if (sub_xray->parsed()) return cmd_xray(rc);
    if (sub_normal->parsed()) return cmd_normal(rc);
    if (sub_beta->parsed()) return cmd_beta(rc);
    if (sub_verify->parsed()) return cmd_verify(rc);
    if (sub_compare->parsed()) return cmd_oracle_compare(rc);
    return 4;  // unreachable with require_subcommand(1)
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 4;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 4;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
