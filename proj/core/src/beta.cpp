#include "twistor/beta.hpp"

#include <algorithm>
#include <cmath>

#include "twistor/errors.hpp"
#include "twistor/normal.hpp"
#include "twistor/parallel.hpp"
#include "twistor/quadrature.hpp"
#include "twistor/xray.hpp"

namespace twistor {

bool TwistorMap::has_mode(int comp, int k) const {
  const auto& v = comp == 0 ? comp0 : comp1;
  return k >= 0 && k < (int)v.size() && !v[(size_t)k].empty();
}

const std::vector<cplx>& TwistorMap::mode(int comp, int k) const {
  require(has_mode(comp, k), "TwistorMap::mode: mode not stored");
  return (comp == 0 ? comp0 : comp1)[(size_t)k];
}

std::pair<cplx, cplx> evaluate(const TwistorMap& map, cplx z, cplx mu) {
  require(std::abs(z) <= map.grid.R * (1.0 + 1e-9), "evaluate: z outside the disk");
  require(std::abs(mu) <= 1.0 + 1e-9, "evaluate: mu outside the closed unit disk");
  const cplx w = mu * mu;

  if (map.analytic.available()) {
    cplx c0 = 0.0, c1 = 0.0;
    for (int k = map.k_max - map.k_max % 2; k >= 0; k -= 2) c0 = c0 * w + map.analytic.u(0, k, z);
    const int k1top = map.k_max - (map.k_max % 2 == 0 ? 1 : 0);
    for (int k = k1top; k >= 1; k -= 2) c1 = c1 * w + map.analytic.u(1, k, z);
    return {c0, c1 * mu};
  }

  const PolarStencil st = polar_stencil(map.grid, z);
  cplx c0 = 0.0, c1 = 0.0;
  for (int k = map.k_max - map.k_max % 2; k >= 0; k -= 2) {
    c0 *= w;
    if (map.has_mode(0, k)) c0 += gather(st, map.mode(0, k));
  }
  const int k1top = map.k_max - (map.k_max % 2 == 0 ? 1 : 0);
  for (int k = k1top; k >= 1; k -= 2) {
    c1 *= w;
    if (map.has_mode(1, k)) c1 += gather(st, map.mode(1, k));
  }
  return {c0, c1 * mu};
}

std::vector<cplx> szego(const std::vector<cplx>& modes, int k_max, Parity parity) {
  require((int)modes.size() == 2 * k_max + 1, "szego: wrong mode vector length");
  std::vector<cplx> out(modes.size(), cplx(0.0));
  const int want = parity == Parity::even ? 0 : 1;
  for (int k = 0; k <= k_max; ++k)
    if (k % 2 == want) out[(size_t)(k + k_max)] = modes[(size_t)(k + k_max)];
  return out;
}

ModeField leading_mode(const TwistorMap& map, int m) {
  require(m >= 0, "leading_mode: nonnegative mode index expected");
  const int comp = m % 2;  // even modes live in component0, odd in component1
  std::vector<cplx> vals((size_t)map.grid.size(), cplx(0.0));
  if (map.has_mode(comp, m)) vals = map.mode(comp, m);
  return single_mode_field(map.grid, m, vals, FieldWeight::smooth);
}

double equivariance_defect(const TwistorMap& map, int p) {
  require(map.metric.rotationally_symmetric,
          "equivariance_defect: metric is not rotationally symmetric");
  const double R = map.grid.R;
  const double radii[] = {0.15 * R, 0.45 * R, 0.75 * R, 0.93 * R};
  const double zang[] = {0.0, 1.1, 2.7};
  const cplx mus[] = {cplx(0.3, 0.0), std::polar(0.8, 0.7), std::polar(1.0, 2.3),
                      std::polar(0.55, -1.9)};
  double worst = 0.0;
  for (int q = 0; q < 12; ++q) {
    const double t = 2.0 * M_PI * q / 12.0 + 0.05;
    const cplx rot = std::polar(1.0, t);
    const cplx ph = std::polar(1.0, p * t);
    for (double r : radii)
      for (double pa : zang)
        for (const cplx& mu : mus) {
          const cplx z = std::polar(r, pa);
          const auto base = evaluate(map, z, mu);
          const auto moved = evaluate(map, rot * z, rot * mu);
          worst = std::max(worst, std::abs(moved.first - ph * base.first));
          worst = std::max(worst, std::abs(moved.second - ph * base.second));
        }
  }
  return worst;
}

namespace {

// cubic interpolation of per-row values in the clustered alpha parameter
cplx interp_alpha(const BoundaryGrid& bg, const std::vector<cplx>& rows, double alpha) {
  const double s = bg.s_of_alpha(alpha);
  const double ds = 2.0 / (bg.n_alpha - 1);
  const double x = (s + 1.0) / ds;
  int a1 = (int)std::floor(x);
  if (a1 < 1) a1 = 1;
  if (a1 > bg.n_alpha - 3) a1 = bg.n_alpha - 3;
  const auto w = cubic_weights(x - a1);
  cplx acc = 0.0;
  for (int q = 0; q < 4; ++q) acc += w[q] * rows[(size_t)(a1 - 1 + q)];
  return acc;
}

// I_k along the chord of bp for the separated field b(|z|) e^{i m phi} rho^{-1/2}
cplx xray_radial_block(const ConformalMetric& m, const PolarGrid& g,
                       const std::vector<cplx>& radial, int k, int m_ang,
                       const BoundaryPoint& bp, int nq) {
  GeodesicRecord rec = chord(m, bp);
  const double tau = rec.exit_time;
  if (!(tau > 0.0)) return cplx(0.0);
  const QuadRule& gc = gauss_chebyshev01(nq);
  const double par = (m_ang % 2 == 0) ? 1.0 : -1.0;
  cplx acc = 0.0;
  for (int q = 0; q < nq; ++q) {
    const double u = gc.nodes[q];
    const PhasePoint p = rec.eval(u * tau);
    const double p_rho = std::max(rho(m, p.z), 1e-300);
    const double wq = gc.weights[q] * tau * std::sqrt(std::max(u * (1.0 - u) / p_rho, 0.0));
    const RadialStencil rs = radial_stencil(g, std::abs(p.z));
    cplx val = 0.0;
    for (int leg = 0; leg < 4; ++leg)
      val += rs.w[leg] * (rs.reflected[leg] ? par : 1.0) * radial[(size_t)rs.idx[leg]];
    acc += wq * val * std::polar(1.0, k * p.theta + m_ang * std::arg(p.z));
  }
  return acc;
}

// radial Tikhonov penalty for a block acting on b(r) e^{i m phi}
Eigen::MatrixXd radial_gram(const PolarGrid& g, int m_ang) {
  const int n = g.n_r;
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  const double dr = g.R / g.n_r;
  for (int i = 0; i + 1 < n; ++i) {
    const double w2 = 1.0 / (dr * dr);
    L(i, i) += w2;
    L(i + 1, i + 1) += w2;
    L(i, i + 1) -= w2;
    L(i + 1, i) -= w2;
  }
  for (int i = 0; i < n; ++i) {
    const double a = m_ang / g.radius(i);
    L(i, i) += a * a;
  }
  return L;
}

struct ComponentPlan {
  int comp = 0;   // target component of the map
  int k = 0;      // fiber mode of the data pair entry
  int m_ang = 0;  // angular mode of the right-hand side
};

void fast_symmetric_path(TwistorMap& map, const GridSpec& spec, const BetaOptions& opt) {
  const ConformalMetric& m = map.metric;
  const PolarGrid& g = map.grid;
  const BoundaryGrid bg = boundary_grid(spec);
  const int nth = g.n_theta;
  SymmetricNormalTable table(m, g, spec.quad_nodes);

  // data pair: mode 0 matched to z (angular mode 1), mode 1 matched to the
  // conformal factor e^{-sigma} (angular mode 0)
  const ComponentPlan plans[2] = {{0, 0, 1}, {1, 1, 0}};
  std::vector<std::vector<cplx>> sharp[2];  // [comp][ring][fiber]

  for (const ComponentPlan& pl : plans) {
    Eigen::VectorXcd rhs(g.n_r);
    for (int i = 0; i < g.n_r; ++i) {
      const double r = g.radius(i);
      rhs(i) = 2.0 * M_PI * (pl.m_ang == 1 ? cplx(r, 0.0) : cplx(m.inv_conformal(r), 0.0));
    }
    const Eigen::MatrixXcd B = table.block(pl.k, pl.m_ang);
    double res = 0.0;
    const Eigen::VectorXcd x = tikhonov_solve(B, radial_gram(g, pl.m_ang), rhs, opt.reg, &res);
    map.solver_residual = std::max(map.solver_residual, res);
    std::vector<cplx> radial((size_t)g.n_r);
    for (int i = 0; i < g.n_r; ++i) radial[(size_t)i] = x(i);

    // boundary data along the omega = 0 column; the rest of the influx
    // annulus is its rotation, h(omega, alpha) = e^{i omega} H(alpha)
    std::vector<cplx> H((size_t)bg.n_alpha);
    parallel_for((size_t)bg.n_alpha, [&](size_t a) {
      H[a] = xray_radial_block(m, g, radial, pl.k, pl.m_ang, {0.0, bg.alpha((int)a)},
                               spec.quad_nodes);
    });

    // invariant extension sampled on the base column, then per-ring fiber
    // transforms; rotations fill in the rest through the p = 1 rule
    auto& tab = sharp[pl.comp];
    tab.assign((size_t)g.n_r, std::vector<cplx>((size_t)nth));
    parallel_for((size_t)g.n_r, [&](size_t i) {
      for (int l = 0; l < nth; ++l) {
        const BoundaryPoint& e = table.entry((int)i, l);
        tab[i][(size_t)l] = std::polar(1.0, e.omega) * interp_alpha(bg, H, e.alpha);
      }
    });
  }

  map.comp0.assign((size_t)map.k_max + 1, {});
  map.comp1.assign((size_t)map.k_max + 1, {});
  double tail = 0.0;
  for (int comp = 0; comp < 2; ++comp) {
    // fibrewise modes per ring
    std::vector<std::vector<cplx>> ck((size_t)g.n_r);
    for (int i = 0; i < g.n_r; ++i) {
      std::vector<cplx> work = sharp[comp][(size_t)i];
      fft_pow2(work, false);
      ck[(size_t)i] = std::move(work);  // raw DFT, index k mod nth
    }
    for (int k = 0; k <= std::min(map.k_max, nth / 2 - 1); ++k) {
      if (k % 2 != comp) continue;  // parity projection
      std::vector<cplx> nodal((size_t)g.size());
      double mag = 0.0;
      for (int i = 0; i < g.n_r; ++i) {
        const cplx c = ck[(size_t)i][(size_t)k] / double(nth);
        mag = std::max(mag, std::abs(c));
        for (int j = 0; j < nth; ++j)
          nodal[(size_t)g.index(i, j)] = c * std::polar(1.0, (1.0 - k) * g.angle(j));
      }
      if (k >= map.k_max - 1) tail = std::max(tail, mag);
      (comp == 0 ? map.comp0 : map.comp1)[(size_t)k] = std::move(nodal);
    }
  }
  if (m.kind == MetricKind::custom) map.truncation_bound = tail;
}

void generic_path(TwistorMap& map, const GridSpec& spec, const BetaOptions& opt) {
  const ConformalMetric& m = map.metric;
  const PolarGrid& g = map.grid;
  const BoundaryGrid bg = boundary_grid(spec);
  const int nth = g.n_theta;

  const ComponentPlan plans[2] = {{0, 0, 1}, {1, 1, 0}};
  BoundaryField h[2] = {make_boundary_field(bg), make_boundary_field(bg)};
  for (const ComponentPlan& pl : plans) {
    std::vector<cplx> rhs((size_t)g.size());
    for (int i = 0; i < g.n_r; ++i)
      for (int j = 0; j < nth; ++j) {
        const cplx z = g.node(i, j);
        rhs[(size_t)g.index(i, j)] =
            2.0 * M_PI * (pl.comp == 0 ? z : cplx(m.inv_conformal(z), 0.0));
      }
    const Eigen::MatrixXcd M = assemble_normal_matrix(m, pl.k, spec);
    double res = 0.0;
    std::vector<cplx> x = solve_normal_with_matrix(M, g, rhs, opt.reg, &res);
    map.solver_residual = std::max(map.solver_residual, res);
    const ModeField a = single_mode_field(g, pl.k, x, FieldWeight::rho_half);
    h[pl.comp] = xray_boundary(m, a, bg, spec.quad_nodes);
  }

  // invariant extension of both data sets at every node and fiber angle;
  // one backward orbit serves both components
  std::vector<std::vector<cplx>> samp[2];
  samp[0].assign((size_t)g.size(), std::vector<cplx>((size_t)nth));
  samp[1].assign((size_t)g.size(), std::vector<cplx>((size_t)nth));
  parallel_for((size_t)g.size(), [&](size_t n0) {
    const int i = (int)n0 / nth, j = (int)n0 % nth;
    const cplx z = g.node(i, j);
    for (int l = 0; l < nth; ++l) {
      const BoundaryPoint e = backward_exit(m, {z, 2.0 * M_PI * l / nth});
      samp[0][n0][(size_t)l] = eval_boundary(h[0], e.omega, e.alpha);
      samp[1][n0][(size_t)l] = eval_boundary(h[1], e.omega, e.alpha);
    }
  });

  map.comp0.assign((size_t)map.k_max + 1, {});
  map.comp1.assign((size_t)map.k_max + 1, {});
  const int k_top = std::min(map.k_max, nth / 2 - 1);
  double tail = 0.0;
  for (int comp = 0; comp < 2; ++comp) {
    std::vector<std::vector<cplx>> nodal((size_t)map.k_max + 1);
    for (int k = comp; k <= k_top; k += 2) nodal[(size_t)k].assign((size_t)g.size(), cplx(0.0));
    for (int n0 = 0; n0 < g.size(); ++n0) {
      std::vector<cplx> work = samp[comp][(size_t)n0];
      fft_pow2(work, false);
      for (int k = comp; k <= k_top; k += 2) {
        const cplx c = work[(size_t)k] / double(nth);
        nodal[(size_t)k][(size_t)n0] = c;
        if (k >= map.k_max - 1) tail = std::max(tail, std::abs(c));
      }
    }
    for (int k = comp; k <= k_top; k += 2)
      (comp == 0 ? map.comp0 : map.comp1)[(size_t)k] = std::move(nodal[(size_t)k]);
  }
  if (m.kind == MetricKind::custom) map.truncation_bound = tail;
}

}  // namespace

TwistorMap beta_extension(const ConformalMetric& m, const GridSpec& spec, const BetaOptions& opt) {
  spec.validate();
  TwistorMap map;
  map.metric = m;
  map.grid = polar_grid(m, spec);
  map.k_max = spec.k_max;
  map.provenance = MapProvenance::pipeline;
  map.kappa = m.kind == MetricKind::constant_curvature ? m.kappa : 0.0;
  map.solver_residual = 0.0;

  // geometric tail estimate of the dropped fiber modes; for the constant
  // curvature family the mode ratio is |kappa| R^2 per two mode steps
  if (m.kind != MetricKind::custom) {
    const double ratio = std::abs(map.kappa) * m.R * m.R;
    map.truncation_bound =
        ratio > 0.0 ? std::pow(ratio, map.k_max / 2.0) / (1.0 - ratio) : 0.0;
  }

  if (m.rotationally_symmetric && !opt.force_generic)
    fast_symmetric_path(map, spec, opt);
  else
    generic_path(map, spec, opt);
  return map;
}

}  // namespace twistor
