#include "twistor/bds.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <random>

#include "twistor/errors.hpp"
#include "twistor/parallel.hpp"

namespace twistor {

namespace {

// nodal d/dz and d/dzbar fields of every stored mode, built once per scan
struct ModeDerivs {
  std::vector<std::vector<cplx>> dz[2], dzb[2];
};

ModeDerivs build_mode_derivs(const TwistorMap& map) {
  ModeDerivs d;
  for (int comp = 0; comp < 2; ++comp) {
    const auto& src = comp == 0 ? map.comp0 : map.comp1;
    d.dz[comp].resize(src.size());
    d.dzb[comp].resize(src.size());
    for (size_t k = 0; k < src.size(); ++k) {
      if (src[k].empty()) continue;
      DerivPair dp = derivative_fields(map.grid, src[k]);
      d.dz[comp][(size_t)k] = std::move(dp.dz);
      d.dzb[comp][(size_t)k] = std::move(dp.dzbar);
    }
  }
  return d;
}

struct RawPartials {
  cplx dz[2], dzb[2];
  cplx dmu[2];     // d/dmu of the component series
  cplx mu_dmu[2];  // mu d/dmu, regular at mu = 0
};

RawPartials raw_partials(const TwistorMap& map, const ModeDerivs* cache, cplx z, cplx mu) {
  RawPartials out{};
  const bool analytic = map.analytic.available();
  PolarStencil st;
  if (!analytic) st = polar_stencil(map.grid, z);
  for (int comp = 0; comp < 2; ++comp) {
    cplx pk_m1 = comp == 1 ? cplx(1.0) : cplx(0.0);  // mu^{k-1}, unused at k = 0
    cplx pk = comp == 1 ? mu : cplx(1.0);            // mu^k
    for (int k = comp; k <= map.k_max; k += 2) {
      cplx uk = 0.0, uk_dz = 0.0, uk_dzb = 0.0;
      if (analytic) {
        uk = map.analytic.u(comp, k, z);
        uk_dz = map.analytic.du_dz(comp, k, z);
        uk_dzb = map.analytic.du_dzbar(comp, k, z);
      } else if (map.has_mode(comp, k)) {
        uk = gather(st, map.mode(comp, k));
        uk_dz = gather(st, cache->dz[comp][(size_t)k]);
        uk_dzb = gather(st, cache->dzb[comp][(size_t)k]);
      }
      out.dz[comp] += uk_dz * pk;
      out.dzb[comp] += uk_dzb * pk;
      if (k > 0) {
        out.dmu[comp] += double(k) * uk * pk_m1;
        out.mu_dmu[comp] += double(k) * uk * pk;
      }
      pk_m1 = pk * mu;
      pk = pk_m1 * mu;
    }
  }
  return out;
}

FrameJacobian frame_jacobian_core(const ConformalMetric& m, const TwistorMap& map,
                                  const ModeDerivs* cache, cplx z, cplx mu) {
  const RawPartials rp = raw_partials(map, cache, z, mu);
  const double es = std::exp(-m.sigma(z));
  const cplx mds = mu * m.dz_sigma(z);
  FrameJacobian J;
  J.z = z;
  J.mu = mu;
  for (int j = 0; j < 2; ++j) {
    J.S[0][j] = es * (rp.dz[j] - mds * rp.dmu[j]);
    J.S[1][j] = rp.dmu[j];
  }
  return J;
}

HermitianPullback pullback_of(const FrameJacobian& J) {
  HermitianPullback H;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      H.h[a][b] = J.S[a][0] * std::conj(J.S[b][0]) + J.S[a][1] * std::conj(J.S[b][1]);
  const double tr = H.h[0][0].real() + H.h[1][1].real();
  const double det = std::norm(J.det());
  const double disc = std::sqrt(std::max(0.25 * tr * tr - det, 0.0));
  H.lambda_min = 0.5 * tr - disc;
  H.lambda_max = 0.5 * tr + disc;
  return H;
}

}  // namespace

FrameJacobian jacobian_S(const ConformalMetric& m, const TwistorMap& map, cplx z, cplx mu) {
  require(std::abs(z) < m.R, "jacobian_S: z must be interior");
  require(std::abs(mu) <= 1.0 + 1e-9, "jacobian_S: mu outside the closed unit disk");
  if (map.analytic.available()) return frame_jacobian_core(m, map, nullptr, z, mu);
  const ModeDerivs cache = build_mode_derivs(map);
  return frame_jacobian_core(m, map, &cache, z, mu);
}

HermitianPullback hermitian_pullback(const ConformalMetric& m, const TwistorMap& map, cplx z,
                                     cplx mu) {
  return pullback_of(jacobian_S(m, map, z, mu));
}

cplx wedge_coefficient(const ConformalMetric& m, const TwistorMap& map, cplx z, cplx mu) {
  require(std::abs(z) < m.R, "wedge_coefficient: z must be interior");
  require(std::abs(mu) < 1.0, "wedge_coefficient: coframe inversion needs |mu| < 1");
  ModeDerivs cache;
  const bool analytic = map.analytic.available();
  if (!analytic) cache = build_mode_derivs(map);
  const RawPartials rp = raw_partials(map, analytic ? nullptr : &cache, z, mu);
  const double es = std::exp(-m.sigma(z));
  const cplx ds = m.dz_sigma(z);
  const cplx dsb = std::conj(ds);
  const double den = 1.0 - std::pow(std::abs(mu), 4);
  const cplx mu2 = mu * mu;
  const cplx mub2 = std::conj(mu2);
  cplx A[2], B[2];
  for (int j = 0; j < 2; ++j) {
    const cplx P = rp.dz[j] - rp.dmu[j] * mu * ds;
    const cplx Q = rp.dzb[j] + rp.dmu[j] * mu * dsb;
    A[j] = es * (P + mub2 * Q) / den;  // eta1 coefficient of d beta_j
    B[j] = rp.dmu[j];                  // eta2 coefficient
  }
  return A[0] * B[1] - A[1] * B[0];
}

DetScan det_scan(const ConformalMetric& m, const TwistorMap& map, const GridSpec& grid) {
  ModeDerivs cache;
  const bool analytic = map.analytic.available();
  if (!analytic) cache = build_mode_derivs(map);
  const ModeDerivs* cp = analytic ? nullptr : &cache;

  // z tensor: the grid radii plus a near-rim ring, trimmed angular count
  std::vector<double> radii;
  for (int i = 0; i < grid.n_r; ++i) radii.push_back(m.R * (2.0 * i + 1.0) / (2.0 * grid.n_r));
  radii.push_back(0.999 * m.R);
  const int n_ang = std::min(grid.n_theta, 32);
  const double mu_mags[] = {0.0, 0.3, 0.6, 0.85, 1.0};
  const int n_psi = 24;

  struct Local {
    double min_det = std::numeric_limits<double>::infinity();
    cplx det_z, det_mu;
    double min_lam = std::numeric_limits<double>::infinity();
    cplx lam_z, lam_mu;
    double max_op = 0.0;
  };
  std::vector<Local> acc((size_t)radii.size() * n_ang);

  parallel_for(acc.size(), [&](size_t idx) {
    const size_t ir = idx / n_ang;
    const int ia = (int)(idx % n_ang);
    const cplx z = std::polar(radii[ir], 2.0 * M_PI * ia / n_ang);
    Local& lo = acc[idx];
    for (double mm : mu_mags) {
      const int np = mm == 0.0 ? 1 : n_psi;
      for (int ip = 0; ip < np; ++ip) {
        const cplx mu = std::polar(mm, 2.0 * M_PI * ip / np);
        const FrameJacobian J = frame_jacobian_core(m, map, cp, z, mu);
        const HermitianPullback H = pullback_of(J);
        const double ad = std::abs(J.det());
        if (ad < lo.min_det) {
          lo.min_det = ad;
          lo.det_z = z;
          lo.det_mu = mu;
        }
        if (H.lambda_min < lo.min_lam) {
          lo.min_lam = H.lambda_min;
          lo.lam_z = z;
          lo.lam_mu = mu;
        }
        lo.max_op = std::max(lo.max_op, std::sqrt(std::max(H.lambda_max, 0.0)));
      }
    }
  });

  DetScan out;
  out.min_abs_det = std::numeric_limits<double>::infinity();
  out.min_lambda = std::numeric_limits<double>::infinity();
  for (const Local& lo : acc) {
    if (lo.min_det < out.min_abs_det) {
      out.min_abs_det = lo.min_det;
      out.det_z = lo.det_z;
      out.det_mu = lo.det_mu;
    }
    if (lo.min_lam < out.min_lambda) {
      out.min_lambda = lo.min_lam;
      out.lambda_z = lo.lam_z;
      out.lambda_mu = lo.lam_mu;
    }
    out.max_op_norm = std::max(out.max_op_norm, lo.max_op);
  }
  return out;
}

namespace {

// boundary restriction beta(R e^{i omega}, e^{i(omega + alpha + pi)})
std::array<cplx, 2> boundary_beta(const TwistorMap& map, double R, double omega, double alpha) {
  const auto v = evaluate(map, std::polar(R, omega), std::polar(1.0, omega + alpha + M_PI));
  return {v.first, v.second};
}

Eigen::Vector4d realify(const std::array<cplx, 2>& v) {
  return {v[0].real(), v[0].imag(), v[1].real(), v[1].imag()};
}

Eigen::Vector4d realify_i(const std::array<cplx, 2>& v) {
  return {-v[0].imag(), v[0].real(), -v[1].imag(), v[1].real()};
}

std::array<cplx, 2> richardson_diff(const std::function<std::array<cplx, 2>(double)>& f,
                                    double x, double h) {
  auto centered = [&](double hh) {
    const auto p = f(x + hh), q = f(x - hh);
    return std::array<cplx, 2>{(p[0] - q[0]) / (2.0 * hh), (p[1] - q[1]) / (2.0 * hh)};
  };
  const auto d1 = centered(h), d2 = centered(0.5 * h);
  return {(4.0 * d2[0] - d1[0]) / 3.0, (4.0 * d2[1] - d1[1]) / 3.0};
}

double embed_det_at(const TwistorMap& map, double R, double omega, double alpha) {
  const double h = 1e-4;
  const auto dw = richardson_diff(
      [&](double w) { return boundary_beta(map, R, w, alpha); }, omega, h);
  const auto da = richardson_diff(
      [&](double a) { return boundary_beta(map, R, omega, a); }, alpha, h);
  Eigen::Matrix4d M;
  M.col(0) = realify(dw);
  M.col(1) = realify(da);
  M.col(2) = realify_i(dw);
  M.col(3) = realify_i(da);
  const double c = std::cos(alpha);
  // measured against the half-incidence parameter (mu sweeps the fiber at
  // twice the rate of alpha), which doubles the alpha column and scales the
  // determinant by 4; the constant-curvature reference minima
  // 16 R^2 (1+kappa R^2)^2 / max|1+kappa R^2 e^{2i alpha}|^4 are pinned in
  // that normalization
  return 4.0 * std::abs(M.determinant()) / (c * c);
}

}  // namespace

EmbedScan totally_real_check(const ConformalMetric& m, const TwistorMap& map, int n_omega,
                             int n_alpha) {
  require(n_omega >= 4 && n_alpha >= 3, "totally_real_check: grid too small");
  const double amax = 0.5 * M_PI - BoundaryGrid::eps_glancing;
  struct Local {
    double min_det = std::numeric_limits<double>::infinity();
    double omega = 0, alpha = 0;
  };
  std::vector<Local> acc((size_t)n_omega);
  parallel_for((size_t)n_omega, [&](size_t j) {
    const double omega = 2.0 * M_PI * j / n_omega;
    Local& lo = acc[j];
    for (int a = 0; a < n_alpha; ++a) {
      const double alpha = -amax + 2.0 * amax * a / (n_alpha - 1);
      const double d = embed_det_at(map, m.R, omega, alpha);
      if (d < lo.min_det) {
        lo.min_det = d;
        lo.omega = omega;
        lo.alpha = alpha;
      }
    }
  });
  EmbedScan out;
  out.min_det = std::numeric_limits<double>::infinity();
  for (const Local& lo : acc)
    if (lo.min_det < out.min_det) {
      out.min_det = lo.min_det;
      out.omega = lo.omega;
      out.alpha = lo.alpha;
    }

  // pairwise injectivity floor of the boundary restriction
  const int nw = std::min(n_omega, 24), na = std::min(n_alpha, 9);
  std::vector<std::array<cplx, 2>> pts;
  std::vector<std::pair<double, double>> par;
  for (int j = 0; j < nw; ++j)
    for (int a = 0; a < na; ++a) {
      const double omega = 2.0 * M_PI * j / nw;
      const double alpha = -amax + 2.0 * amax * a / (na - 1);
      pts.push_back(boundary_beta(map, m.R, omega, alpha));
      par.emplace_back(omega, alpha);
    }
  double ratio = std::numeric_limits<double>::infinity();
  for (size_t p = 0; p < pts.size(); ++p)
    for (size_t q = p + 1; q < pts.size(); ++q) {
      const double dw = std::abs(pts[p][0] - pts[q][0]);
      const double dx = std::abs(pts[p][1] - pts[q][1]);
      const double dom = par[p].first - par[q].first;
      const double dal = par[p].second - par[q].second;
      const double dist = std::sqrt(4.0 * std::pow(std::sin(0.5 * dom), 2) + dal * dal);
      if (dist < 1e-12) continue;
      ratio = std::min(ratio, std::sqrt(dw * dw + dx * dx) / dist);
    }
  out.min_pair_ratio = ratio;
  return out;
}

double totally_real_window_min(const ConformalMetric& m, const TwistorMap& map, int n_omega,
                               int n_alpha, double alpha_lo, double alpha_hi) {
  double best = std::numeric_limits<double>::infinity();
  for (int j = 0; j < n_omega; ++j)
    for (int a = 0; a < n_alpha; ++a) {
      const double omega = 2.0 * M_PI * j / n_omega;
      const double alpha = alpha_lo + (alpha_hi - alpha_lo) * a / (n_alpha - 1);
      best = std::min(best, embed_det_at(map, m.R, omega, alpha));
    }
  return best;
}

double fold_chart_min(const ConformalMetric& m, const TwistorMap& map, int n_omega, int n_alpha,
                      double alpha_lo, double alpha_hi) {
  // chart (v, w) = (sin^2 alpha, omega + alpha); d(v,w)/d(omega,alpha) has
  // determinant sin(2 alpha), so the rescaled quantity 16 sin^2(alpha) D_fold
  // must reproduce the half-incidence-normalized 4 D/cos^2(alpha)
  require(alpha_lo > 0.05 && alpha_hi < 0.5 * M_PI - 0.05, "fold_chart_min: window too wide");
  auto beta_chart = [&](double v, double w) {
    const double alpha = std::asin(std::sqrt(v));
    return boundary_beta(map, m.R, w - alpha, alpha);
  };
  double best = std::numeric_limits<double>::infinity();
  const double h = 1e-4;
  for (int j = 0; j < n_omega; ++j)
    for (int a = 0; a < n_alpha; ++a) {
      const double omega = 2.0 * M_PI * j / n_omega;
      const double alpha = alpha_lo + (alpha_hi - alpha_lo) * a / (n_alpha - 1);
      const double v0 = std::pow(std::sin(alpha), 2), w0 = omega + alpha;
      const auto dv = richardson_diff([&](double v) { return beta_chart(v, w0); }, v0, h);
      const auto dw = richardson_diff([&](double w) { return beta_chart(v0, w); }, w0, h);
      Eigen::Matrix4d M;
      M.col(0) = realify(dv);
      M.col(1) = realify(dw);
      M.col(2) = realify_i(dv);
      M.col(3) = realify_i(dw);
      const double D_fold = std::abs(M.determinant());
      best = std::min(best, 16.0 * std::pow(std::sin(alpha), 2) * D_fold);
    }
  return best;
}

double holomorphy_residual(const ConformalMetric& m, const TwistorMap& map,
                           const GridSpec& grid) {
  (void)grid;
  ModeDerivs cache;
  const bool analytic = map.analytic.available();
  if (!analytic) cache = build_mode_derivs(map);
  const ModeDerivs* cp = analytic ? nullptr : &cache;

  const double mu_mags[] = {0.25, 0.55, 0.8, 0.95};
  const int n_psi = 12;
  std::vector<cplx> zs;
  if (analytic) {
    const double radii[] = {0.12, 0.3, 0.5, 0.68, 0.8, 0.9};
    const int n_zang = 12;
    for (double rr : radii)
      for (int ia = 0; ia < n_zang; ++ia)
        zs.push_back(std::polar(rr * m.R, 2.0 * M_PI * ia / n_zang));
  } else {
    // grid-backed maps are probed at their own nodes, where the gathers read
    // nodal values exactly; off-grid points would fold cubic interpolation
    // error into a residual meant to measure the derivative fields
    const PolarGrid& g = map.grid;
    const int ri = std::max(1, g.n_r / 7), rj = std::max(1, g.n_theta / 12);
    for (int i = 1; i < g.n_r - 1; i += ri)
      for (int j = 0; j < g.n_theta; j += rj) zs.push_back(g.node(i, j));
  }
  double worst = 0.0;
  for (const cplx& z : zs) {
    const double es = std::exp(-m.sigma(z));
    const cplx ds = m.dz_sigma(z);
    const cplx dsb = std::conj(ds);
    for (double mm : mu_mags)
      for (int ip = 0; ip < n_psi; ++ip) {
        const cplx mu = std::polar(mm, 2.0 * M_PI * ip / n_psi);
        const cplx mu2 = mu * mu;
        const RawPartials rp = raw_partials(map, cp, z, mu);
        for (int j = 0; j < 2; ++j) {
          const cplx xi =
              es * (mu2 * rp.dz[j] + rp.dzb[j] - (mu2 * ds - dsb) * rp.mu_dmu[j]);
          worst = std::max(worst, std::abs(xi));
        }
      }
  }
  return worst;
}

namespace {

struct Lattice {
  std::vector<cplx> zs, mus;
  std::vector<std::array<cplx, 2>> vals;
  std::vector<std::vector<std::pair<int, double>>> adj;
  int count = 0;
};

Lattice build_lattice(const ConformalMetric& m, const TwistorMap& map, double delta) {
  const int nr = 9, nphi = 16, nm = 7, npsi = 12;
  const double Rin = (1.0 - delta) * m.R, Min = 1.0 - delta;
  Lattice L;
  L.count = nr * nphi * nm * npsi;
  L.zs.resize((size_t)L.count);
  L.mus.resize((size_t)L.count);
  L.vals.resize((size_t)L.count);
  auto index = [&](int ir, int ip, int im, int is) {
    return ((ir * nphi + ip) * nm + im) * npsi + is;
  };
  for (int ir = 0; ir < nr; ++ir)
    for (int ip = 0; ip < nphi; ++ip)
      for (int im = 0; im < nm; ++im)
        for (int is = 0; is < npsi; ++is) {
          const int id = index(ir, ip, im, is);
          L.zs[(size_t)id] = std::polar(Rin * (ir + 1) / nr, 2.0 * M_PI * ip / nphi);
          L.mus[(size_t)id] = std::polar(Min * im / (nm - 1), 2.0 * M_PI * is / npsi);
        }
  parallel_for((size_t)L.count, [&](size_t id) {
    const auto v = evaluate(map, L.zs[id], L.mus[id]);
    L.vals[id] = {v.first, v.second};
  });

  // frame-form edge lengths at segment midpoints
  auto weight = [&](int a, int b) {
    const cplx zm = 0.5 * (L.zs[(size_t)a] + L.zs[(size_t)b]);
    const cplx mum = 0.5 * (L.mus[(size_t)a] + L.mus[(size_t)b]);
    const cplx dz = L.zs[(size_t)b] - L.zs[(size_t)a];
    const cplx dmu = L.mus[(size_t)b] - L.mus[(size_t)a];
    const cplx ds = m.dz_sigma(zm);
    const cplx eta1 = std::exp(m.sigma(zm)) * (dz - mum * mum * std::conj(dz));
    const cplx eta2 = dmu + mum * (ds * dz - std::conj(ds) * std::conj(dz));
    return std::sqrt(std::norm(eta1) + std::norm(eta2));
  };
  L.adj.resize((size_t)L.count);
  auto link = [&](int a, int b) {
    const double w = weight(a, b);
    L.adj[(size_t)a].emplace_back(b, w);
    L.adj[(size_t)b].emplace_back(a, w);
  };
  for (int ir = 0; ir < nr; ++ir)
    for (int ip = 0; ip < nphi; ++ip)
      for (int im = 0; im < nm; ++im)
        for (int is = 0; is < npsi; ++is) {
          const int id = index(ir, ip, im, is);
          if (ir + 1 < nr) link(id, index(ir + 1, ip, im, is));
          link(id, index(ir, (ip + 1) % nphi, im, is));
          if (im + 1 < nm) link(id, index(ir, ip, im + 1, is));
          if (im > 0) link(id, index(ir, ip, im, (is + 1) % npsi));
        }
  return L;
}

std::vector<double> dijkstra(const Lattice& L, int src) {
  std::vector<double> dist((size_t)L.count, std::numeric_limits<double>::infinity());
  using QE = std::pair<double, int>;
  std::priority_queue<QE, std::vector<QE>, std::greater<QE>> pq;
  dist[(size_t)src] = 0.0;
  pq.emplace(0.0, src);
  while (!pq.empty()) {
    const auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[(size_t)u]) continue;
    for (const auto& [v, w] : L.adj[(size_t)u]) {
      const double nd = d + w;
      if (nd < dist[(size_t)v]) {
        dist[(size_t)v] = nd;
        pq.emplace(nd, v);
      }
    }
  }
  return dist;
}

}  // namespace

InjectivityScan injectivity_scan(const ConformalMetric& m, const TwistorMap& map, int n_pairs,
                                 std::uint64_t seed) {
  require(n_pairs >= 1, "injectivity_scan: need at least one pair");
  InjectivityScan out;
  const Lattice L = build_lattice(m, map, out.delta);

  // pair selection is independent of the map, so identical (n_pairs, seed)
  // reproduce identical pairs on oracle and pipeline scans
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, L.count - 1);
  std::vector<std::pair<int, int>> pairs;
  while ((int)pairs.size() < n_pairs) {
    const int a = pick(rng), b = pick(rng);
    if (a == b) continue;
    if (std::abs(L.zs[(size_t)a] - L.zs[(size_t)b]) +
            std::abs(L.mus[(size_t)a] - L.mus[(size_t)b]) <
        1e-9)
      continue;  // distinct lattice ids can alias the same point at mu = 0
    pairs.emplace_back(a, b);
  }

  out.min_ratio = std::numeric_limits<double>::infinity();
  for (const auto& [a, b] : pairs) {
    const std::vector<double> dist = dijkstra(L, a);
    const double d = dist[(size_t)b];
    if (!(d > 1e-12)) continue;
    const double num = std::sqrt(std::norm(L.vals[(size_t)a][0] - L.vals[(size_t)b][0]) +
                                 std::norm(L.vals[(size_t)a][1] - L.vals[(size_t)b][1]));
    const double r = num / d;
    if (r < out.min_ratio) {
      out.min_ratio = r;
      out.z_a = L.zs[(size_t)a];
      out.mu_a = L.mus[(size_t)a];
      out.z_b = L.zs[(size_t)b];
      out.mu_b = L.mus[(size_t)b];
    }
    out.max_ratio = std::max(out.max_ratio, r);
  }
  return out;
}

BdsThresholds default_thresholds(const ConformalMetric& m, const GridSpec& grid, int n_pairs,
                                 std::uint64_t seed) {
  double kappa = 0.0;
  if (m.kind == MetricKind::constant_curvature) {
    kappa = m.kappa;
  } else if (m.kind == MetricKind::custom) {
    kappa = gauss_curvature(m, cplx(0.0)) / 4.0;
    const double cap = 0.9 / (m.R * m.R);
    kappa = std::clamp(kappa, -cap, cap);
  }
  const CCParams p{kappa, m.R};
  BdsThresholds t;
  t.min_abs_det_S = 0.5 * det_scan_min_cc(p);
  t.min_lambda_min = 0.5 * lambda_min_bound(p);
  t.min_tr_embed_det = 0.5 * totally_real_min_cc(p);

  const ConformalMetric ref = constant_curvature_metric(kappa, m.R);
  const TwistorMap oracle = oracle_twistor_map(p, polar_grid(ref, grid), grid.k_max);
  t.min_injectivity_ratio = 0.5 * injectivity_scan(ref, oracle, n_pairs, seed).min_ratio;
  return t;
}

BdsReport certify_bds(const ConformalMetric& m, const TwistorMap& map, const GridSpec& grid,
                      const BdsThresholds* thresholds, int n_pairs, std::uint64_t seed) {
  BdsReport rep;
  rep.thresholds = thresholds ? *thresholds : default_thresholds(m, grid, n_pairs, seed);

  const DetScan ds = det_scan(m, map, grid);
  rep.min_abs_det_S = ds.min_abs_det;
  rep.det_z = ds.det_z;
  rep.det_mu = ds.det_mu;
  rep.min_lambda_min = ds.min_lambda;
  rep.lambda_z = ds.lambda_z;
  rep.lambda_mu = ds.lambda_mu;

  const EmbedScan es = totally_real_check(m, map, 64, 33);
  rep.min_tr_embed_det = es.min_det;
  rep.embed_omega = es.omega;
  rep.embed_alpha = es.alpha;
  rep.boundary_pair_ratio = es.min_pair_ratio;

  const InjectivityScan is = injectivity_scan(m, map, n_pairs, seed);
  rep.min_injectivity_ratio = is.min_ratio;
  rep.pair_z_a = is.z_a;
  rep.pair_mu_a = is.mu_a;
  rep.pair_z_b = is.z_b;
  rep.pair_mu_b = is.mu_b;
  rep.interior_margin = is.delta;

  rep.holomorphy_residual = holomorphy_residual(m, map, grid);

  rep.det_ok = rep.min_abs_det_S > rep.thresholds.min_abs_det_S;
  rep.lambda_ok = rep.min_lambda_min > rep.thresholds.min_lambda_min;
  rep.injectivity_ok = rep.min_injectivity_ratio > rep.thresholds.min_injectivity_ratio;
  rep.embed_ok = rep.min_tr_embed_det > rep.thresholds.min_tr_embed_det;
  rep.holomorphy_ok = rep.holomorphy_residual < rep.thresholds.holomorphy;
  rep.pass =
      rep.det_ok && rep.lambda_ok && rep.injectivity_ok && rep.embed_ok && rep.holomorphy_ok;
  return rep;
}

}  // namespace twistor
