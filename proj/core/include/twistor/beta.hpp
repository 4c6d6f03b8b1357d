#pragma once

#include <string>
#include <utility>
#include <vector>

#include "twistor/fields.hpp"

namespace twistor {

enum class MapProvenance { pipeline, oracle_cc, euclidean };

// Optional closed-form access to mode coefficients (comp in {0,1}); filled
// for oracle maps so certificate scans can bypass grid interpolation.
struct AnalyticModes {
  std::function<cplx(int comp, int k, cplx z)> u, du_dz, du_dzbar;
  bool available() const { return static_cast<bool>(u); }
};

// Candidate twistor map as truncated fibrewise power series
//   component0(z, mu) = sum_{even k >= 0} u_k(z) mu^k
//   component1(z, mu) = sum_{odd k >= 1} u_k(z) mu^k
// with nodal coefficients on the polar grid. comp0/comp1 are indexed by k;
// an empty vector is an identically zero mode, and parity purity (even
// modes only in comp0, odd only in comp1) is enforced at build time.
struct TwistorMap {
  ConformalMetric metric;
  PolarGrid grid;
  int k_max = 0;
  MapProvenance provenance = MapProvenance::pipeline;
  double kappa = 0.0;  // meaningful for oracle_cc
  std::vector<std::vector<cplx>> comp0, comp1;
  AnalyticModes analytic;

  double truncation_bound = 0.0;  // geometric-tail estimate recorded at build
  double solver_residual = 0.0;   // worst relative normal-solve residual

  bool has_mode(int comp, int k) const;
  const std::vector<cplx>& mode(int comp, int k) const;
};

// (component0, component1) at (z, mu), |z| <= R, |mu| <= 1. Coefficients
// interpolated in z, Horner summation in mu^2.
std::pair<cplx, cplx> evaluate(const TwistorMap& map, cplx z, cplx mu);

// Fibrewise Szego projection: keeps nonnegative modes of one parity, zeroes
// everything else. Mode vectors are indexed k = -k_max..k_max at offset
// k + k_max (the fourier_modes layout).
enum class Parity { even, odd };
std::vector<cplx> szego(const std::vector<cplx>& modes, int k_max, Parity parity);

struct BetaOptions {
  double reg = -1.0;           // < 0 selects the default 1e-8 * |matrix|
  bool force_generic = false;  // skip the rotational-symmetry fast path
};

// The canonical beta-extension: solves the normal equations for the data
// pair (z, dz), X-rays the solutions, extends invariantly, decomposes into
// fibrewise modes and applies the parity Szego projections.
TwistorMap beta_extension(const ConformalMetric& m, const GridSpec& grid,
                          const BetaOptions& opt = {});

// Coefficient field u_m of the component selected by the parity of m.
ModeField leading_mode(const TwistorMap& map, int m);

// sup over sampled (z, mu, t) of |u(e^{it}z, e^{it}mu) - e^{ipt} u(z, mu)|
// across both components; only meaningful for rotationally symmetric
// metrics (rejected otherwise).
double equivariance_defect(const TwistorMap& map, int p = 1);

// container round trip: JSON header line + little-endian complex payload
void save_twistor_map(const TwistorMap& map, const std::string& path);
TwistorMap load_twistor_map(const std::string& path);

}  // namespace twistor
