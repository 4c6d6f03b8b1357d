// End-to-end checks of the twistor binary: exit codes, file outputs,
// determinism. argv[1] is the path to the built binary. Not a doctest
// suite on purpose: everything goes through std::system like a user would.

#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "twistor/oracles.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int g_failures = 0;
std::string g_bin;
const fs::path g_root = "/tmp/twistor_cli_test";

void check(bool ok, const std::string& what) {
  if (!ok) {
    ++g_failures;
    std::cerr << "FAIL: " << what << "\n";
  }
}

int run(const std::string& args) {
  const std::string cmd = g_bin + " " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  if (rc == -1) return -1;
#ifdef WEXITSTATUS
  return WEXITSTATUS(rc);
#else
  return rc;
#endif
}

void write_file(const fs::path& p, const std::string& body) {
  std::ofstream os(p, std::ios::binary);
  os << body;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<double>> read_csv(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::vector<double>> rows;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      header = false;
      continue;
    }
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string base_config(const std::string& extra) {
  return "[metric]\nkind = constant_curvature\nkappa = 0.3\nR = 1.0\n"
         "[grid]\nn_r = 32\nn_theta = 128\nk_max = 32\nquad_nodes = 48\n"
         "[run]\nseed = 20260822\n" +
         extra;
}

void test_flow() {
  const fs::path dir = g_root / "flow";
  const fs::path cfg = dir / "run.ini";
  fs::create_directories(dir);
  write_file(cfg, "[metric]\nkind = euclidean\nR = 1.0\n"
                  "[flow]\npoints = 0:0 0.7:0.4\nn_scatter = 9\nalpha_max = 1.3\n");
  check(run("--config " + cfg.string() + " --out " + (dir / "out").string() + " flow") == 0,
        "flow exits 0");

  const auto chords = read_csv(dir / "out" / "chords.csv");
  check(!chords.empty(), "chords.csv has rows");
  // point 0 is the diameter: the last of its rows exits at t = 2R
  double last_t = -1.0;
  for (const auto& row : chords)
    if (row.size() == 5 && row[0] == 0.0) last_t = row[1];
  check(std::abs(last_t - 2.0) < 1e-9, "diameter chord exits at t = 2");

  // euclidean scattering: omega_out = omega + pi + 2 alpha
  for (const auto& row : read_csv(dir / "out" / "scattering.csv")) {
    const double want = std::remainder(row[0] + M_PI + 2.0 * row[1] - row[2], 2.0 * M_PI);
    check(std::abs(want) < 1e-9, "flat scattering row matches the closed form");
  }

  // empty point list: header-only chords.csv
  write_file(cfg, "[metric]\nkind = euclidean\nR = 1.0\n[flow]\npoints =\nn_scatter = 5\n");
  check(run("--config " + cfg.string() + " --out " + (dir / "out2").string() + " flow") == 0,
        "flow with no points exits 0");
  check(read_csv(dir / "out2" / "chords.csv").empty(), "no points -> header-only chords.csv");
  check(read_file(dir / "out2" / "chords.csv").rfind("point,t,x,y,theta", 0) == 0,
        "chords.csv keeps its header");
}

void test_flow_scattering_cc() {
  const fs::path dir = g_root / "scatter_cc";
  const fs::path cfg = dir / "run.ini";
  fs::create_directories(dir);
  write_file(cfg, "[metric]\nkind = constant_curvature\nkappa = 0.3\nR = 1.0\n"
                  "[flow]\npoints =\nn_scatter = 17\nalpha_max = 1.3\n");
  check(run("--config " + cfg.string() + " --out " + (dir / "out").string() + " flow") == 0,
        "cc flow exits 0");
  const twistor::CCParams p{0.3, 1.0};
  for (const auto& row : read_csv(dir / "out" / "scattering.csv")) {
    const double s = twistor::scattering_cc(p, row[1]);
    const double want = std::remainder(row[0] + M_PI + 2.0 * s - row[2], 2.0 * M_PI);
    check(std::abs(want) < 1e-6, "cc scattering column matches the closed form");
  }
}

void test_xray_normal() {
  const fs::path dir = g_root / "xn";
  const fs::path cfg = dir / "run.ini";
  fs::create_directories(dir);
  // flat disk, smooth constant: every alpha = 0 sample is a diameter, I_0 = 2R
  write_file(cfg, "[metric]\nkind = euclidean\nR = 1.0\n"
                  "[grid]\nn_r = 8\nn_theta = 32\nk_max = 8\nquad_nodes = 32\n"
                  "[xray]\nk = 0\nweight = smooth\nexpr = 1\n");
  check(run("--config " + cfg.string() + " --out " + (dir / "out").string() + " xray") == 0,
        "xray exits 0");
  int diameters = 0;
  for (const auto& row : read_csv(dir / "out" / "xray.csv"))
    if (std::abs(row[1]) < 1e-12) {
      ++diameters;
      check(std::abs(row[2] - 2.0) < 1e-9, "I_0(1) = 2 on diameters");
      check(std::abs(row[3]) < 1e-12, "diameter transform is real");
    }
  check(diameters > 0, "alpha = 0 row present in xray.csv");

  write_file(cfg, "[metric]\nkind = euclidean\nR = 1.0\n"
                  "[grid]\nn_r = 16\nn_theta = 64\nk_max = 16\nquad_nodes = 48\n"
                  "[normal]\nop = solve\nk = 0\nexpr = 1\n");
  check(run("--config " + cfg.string() + " --out " + (dir / "out2").string() + " normal") == 0,
        "normal solve exits 0");
  const json summary = json::parse(read_file(dir / "out2" / "normal_summary.json"));
  check(summary.at("roundtrip_residual").get<double>() < 1e-3,
        "normal solve roundtrip residual below 1e-3");
  check(summary.at("weight").get<std::string>() == "rho_half",
        "solution comes back in the singular-weight basis");
}

void test_beta_verify_compare() {
  const fs::path dir = g_root / "beta";
  const fs::path cfg = dir / "run.ini";
  fs::create_directories(dir);
  write_file(cfg, base_config("[verify]\nmap = " + (dir / "out" / "beta_map.tbm").string() +
                              "\n[compare]\nmap = " + (dir / "out" / "beta_map.tbm").string() +
                              "\nkappa = 0.3\ntol = 5e-3\n"));

  check(run("--config " + cfg.string() + " --out " + (dir / "out").string() + " beta") == 0,
        "beta exits 0");
  check(fs::exists(dir / "out" / "beta_map.tbm"), "container written");
  const json summary = json::parse(read_file(dir / "out" / "beta_summary.json"));
  check(summary.at("solver_residual").get<double>() < 1e-4, "solver residual recorded and small");

  // dominant modes carry the blow-down structure: k = 0, 2 in the even
  // component, k = 1 in the odd one
  double base0 = 0.0, base2 = 0.0, tail0 = 0.0, base1 = 0.0, tail1 = 0.0;
  for (const auto& e : summary.at("component0_modes")) {
    const int k = e.at("k").get<int>();
    const double s = e.at("sup").get<double>();
    if (k == 0) base0 = s;
    else if (k == 2) base2 = s;
    else tail0 = std::max(tail0, s);
  }
  for (const auto& e : summary.at("component1_modes")) {
    const int k = e.at("k").get<int>();
    const double s = e.at("sup").get<double>();
    if (k == 1) base1 = s;
    else tail1 = std::max(tail1, s);
  }
  check(base0 > 0.2 && base2 > 0.2 && base1 > 0.5, "modes {0,2} and {1} dominant");
  check(tail0 < 0.5 * base2 && tail1 < 0.5 * base1, "higher modes subdominant");

  check(run("--config " + cfg.string() + " --out " + (dir / "out").string() + " verify-bds") == 0,
        "verify-bds passes on the pipeline map");
  const json rep = json::parse(read_file(dir / "out" / "bds_report.json"));
  check(rep.at("pass").get<bool>(), "report pass flag");
  check(rep.at("min_lambda_min").get<double>() >
            rep.at("thresholds").at("min_lambda_min").get<double>(),
        "lambda margin recorded");

  check(run("--config " + cfg.string() + " --out " + (dir / "out").string() +
            " oracle-compare") == 0,
        "oracle-compare within tolerance");
  const json cmp = json::parse(read_file(dir / "out" / "oracle_compare.json"));
  check(cmp.at("pass").get<bool>(), "compare pass flag");

  // determinism: a second run from the same config is byte-identical
  check(run("--config " + cfg.string() + " --out " + (dir / "out_b").string() + " beta") == 0,
        "second beta run exits 0");
  check(read_file(dir / "out" / "beta_summary.json") ==
            read_file(dir / "out_b" / "beta_summary.json"),
        "beta summary byte-identical across runs");
  check(read_file(dir / "out" / "beta_map.tbm") == read_file(dir / "out_b" / "beta_map.tbm"),
        "container byte-identical across runs");
  write_file(dir / "cfg_b.ini",
             base_config("[verify]\nmap = " + (dir / "out_b" / "beta_map.tbm").string() + "\n"));
  check(run("--config " + (dir / "cfg_b.ini").string() + " --out " + (dir / "out_b").string() +
            " verify-bds") == 0,
        "verify-bds on the second container");
  check(read_file(dir / "out" / "bds_report.json") ==
            read_file(dir / "out_b" / "bds_report.json"),
        "bds report byte-identical across runs");
}

void test_failure_paths() {
  const fs::path dir = g_root / "failures";
  fs::create_directories(dir);

  // outside the simplicity range: chord integration cannot be trusted, the
  // metric constructor rejects it
  write_file(dir / "bad_kappa.ini",
             "[metric]\nkind = constant_curvature\nkappa = 1.2\nR = 1.0\n"
             "[grid]\nn_r = 8\nn_theta = 32\nk_max = 8\nquad_nodes = 24\n");
  check(run("--config " + (dir / "bad_kappa.ini").string() + " --out " +
            (dir / "out").string() + " beta") == 4,
        "kappa R^2 >= 1 exits 4");

  write_file(dir / "bad_syntax.ini", "[metric\nkind = euclidean\n");
  check(run("--config " + (dir / "bad_syntax.ini").string() + " --out " +
            (dir / "out").string() + " flow") == 4,
        "malformed config exits 4");

  check(run("--config " + (dir / "missing.ini").string() + " --out " + (dir / "out").string() +
            " flow") == 4,
        "missing config exits 4");

  // corrupted container
  fs::create_directories(dir / "out");
  write_file(dir / "out" / "broken.tbm", "{\"junk\": true}\nnot a payload");
  write_file(dir / "corrupt.ini",
             base_config("[verify]\nmap = " + (dir / "out" / "broken.tbm").string() + "\n"));
  check(run("--config " + (dir / "corrupt.ini").string() + " --out " + (dir / "out").string() +
            " verify-bds") == 4,
        "corrupted container exits 4");

  // thresholds pushed above the oracle constants: deterministic fail, exit 2
  const fs::path beta_map = g_root / "beta" / "out" / "beta_map.tbm";
  write_file(dir / "strict.ini",
             base_config("[verify]\nmap = " + beta_map.string() +
                         "\nmin_abs_det_S = 10.0\n"));
  check(run("--config " + (dir / "strict.ini").string() + " --out " + (dir / "out").string() +
            " verify-bds") == 2,
        "unreachable threshold exits 2");
  const json rep = json::parse(read_file(dir / "out" / "bds_report.json"));
  check(!rep.at("pass").get<bool>() && !rep.at("det_ok").get<bool>(),
        "strict-threshold report records the failing flag");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: test_cli <path-to-twistor-binary>\n";
    return 2;
  }
  g_bin = argv[1];
  std::error_code ec;
  fs::remove_all(g_root, ec);
  fs::create_directories(g_root);

  test_flow();
  test_flow_scattering_cc();
  test_xray_normal();
  test_beta_verify_compare();
  test_failure_paths();

  if (g_failures == 0) {
    std::cout << "test_cli: all checks passed\n";
    fs::remove_all(g_root, ec);
    return 0;
  }
  std::cout << "test_cli: " << g_failures << " failures (outputs kept in " << g_root.string()
            << ")\n";
  return 1;
}
