#pragma once

#include <cstdint>

#include "twistor/beta.hpp"
#include "twistor/oracles.hpp"

namespace twistor {

// Derivative of a twistor map along the adapted holomorphic frame; stays
// finite up to |mu| = 1 because the frame absorbs the fiber degeneracy.
// Column j is the component, row 0 the horizontal direction, row 1 the
// fiber direction: S[0][j] = e^{-sigma} (d_z beta_j - mu d_z sigma d_mu
// beta_j), S[1][j] = d_mu beta_j.
struct FrameJacobian {
  cplx S[2][2];
  cplx z, mu;

  cplx det() const { return S[0][0] * S[1][1] - S[0][1] * S[1][0]; }
};

FrameJacobian jacobian_S(const ConformalMetric& m, const TwistorMap& map, cplx z, cplx mu);

// H = S S^*, with the smallest eigenvalue from the closed 2x2 formula
// tr/2 - sqrt((tr/2)^2 - det).
struct HermitianPullback {
  cplx h[2][2];
  double lambda_min = 0.0;
  double lambda_max = 0.0;
};
HermitianPullback hermitian_pullback(const ConformalMetric& m, const TwistorMap& map, cplx z,
                                     cplx mu);

// eta1 ^ eta2 coefficient of d beta_1 ^ d beta_2, assembled from raw
// partials only (no holomorphy assumption); requires |mu| < 1 where the
// coframe inversion is regular. For holomorphic maps it agrees with det S.
cplx wedge_coefficient(const ConformalMetric& m, const TwistorMap& map, cplx z, cplx mu);

// Tensor scan of the frame Jacobian over (z, mu), |mu| up to 1 and z up to
// the rim. Tracks the smallest |det S|, the smallest pullback eigenvalue
// and the largest operator norm in one sweep.
struct DetScan {
  double min_abs_det = 0.0;
  cplx det_z, det_mu;
  double min_lambda = 0.0;
  cplx lambda_z, lambda_mu;
  double max_op_norm = 0.0;
};
DetScan det_scan(const ConformalMetric& m, const TwistorMap& map, const GridSpec& grid);

// Random-pair injectivity certificate |beta(p) - beta(q)| / d(p, q) on the
// compact sub-domain |z| <= (1 - delta) R, |mu| <= 1 - delta, delta = 0.02.
// d is the shortest path on a 4d lattice with edge lengths from the
// adapted frame's quadratic form, so locally the ratio approaches the
// singular values of S.
struct InjectivityScan {
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  cplx z_a, mu_a, z_b, mu_b;  // pair attaining the minimum
  double delta = 0.02;
};
InjectivityScan injectivity_scan(const ConformalMetric& m, const TwistorMap& map, int n_pairs,
                                 std::uint64_t seed);

// Totally-real embedding scan of the boundary restriction
// (omega, alpha) -> beta(R e^{i omega}, e^{i(omega + alpha + pi)}):
// |det(d_omega, d_alpha, J d_omega, J d_alpha)| / cos^2(alpha) minimized
// over the grid (alpha up to pi/2 - eps_g; centered differences with one
// Richardson refinement), plus a pairwise injectivity floor of the same
// restriction.
struct EmbedScan {
  double min_det = 0.0;
  double omega = 0.0, alpha = 0.0;
  double min_pair_ratio = 0.0;
};
EmbedScan totally_real_check(const ConformalMetric& m, const TwistorMap& map, int n_omega,
                             int n_alpha);

// the same minimum restricted to an alpha window (both signs of alpha)
double totally_real_window_min(const ConformalMetric& m, const TwistorMap& map, int n_omega,
                               int n_alpha, double alpha_lo, double alpha_hi);

// Minimum of the rescaled determinant computed in the fold chart
// (v, w) = (sin^2 alpha, omega + s(alpha)) instead of (omega, alpha);
// chart independence of the non-vanishing claim. Flat-disk charts only
// (s(alpha) = alpha).
double fold_chart_min(const ConformalMetric& m, const TwistorMap& map, int n_omega, int n_alpha,
                      double alpha_lo, double alpha_hi);

// sup |Xi_sigma beta_j| over an interior sample tensor; the fiber-
// antiholomorphic derivative vanishes identically for true twistor maps.
double holomorphy_residual(const ConformalMetric& m, const TwistorMap& map,
                           const GridSpec& grid);

struct BdsThresholds {
  double min_abs_det_S = 0.0;
  double min_lambda_min = 0.0;
  double min_injectivity_ratio = 0.0;
  double min_tr_embed_det = 0.0;
  double holomorphy = 5e-3;
};

// Default thresholds: 50% of the constant-curvature reference values for
// the nearest kappa (injectivity from an oracle-map scan with the same
// lattice and seed).
BdsThresholds default_thresholds(const ConformalMetric& m, const GridSpec& grid, int n_pairs,
                                 std::uint64_t seed);

struct BdsReport {
  double min_abs_det_S = 0.0;
  double min_lambda_min = 0.0;
  double min_injectivity_ratio = 0.0;
  double min_tr_embed_det = 0.0;
  double holomorphy_residual = 0.0;

  cplx det_z, det_mu;
  cplx lambda_z, lambda_mu;
  double embed_omega = 0.0, embed_alpha = 0.0;
  cplx pair_z_a, pair_mu_a, pair_z_b, pair_mu_b;
  double boundary_pair_ratio = 0.0;
  double interior_margin = 0.02;  // injectivity certified on this sub-domain only

  BdsThresholds thresholds;
  bool det_ok = false, lambda_ok = false, injectivity_ok = false, embed_ok = false,
       holomorphy_ok = false;
  bool pass = false;
};

// Full certificate: runs every scan, fills the flags against the given (or
// default) thresholds.
BdsReport certify_bds(const ConformalMetric& m, const TwistorMap& map, const GridSpec& grid,
                      const BdsThresholds* thresholds = nullptr, int n_pairs = 64,
                      std::uint64_t seed = 20260822ull);

}  // namespace twistor
