#include <cmath>

#include "twistor/errors.hpp"
#include "twistor/parallel.hpp"
#include "twistor/quadrature.hpp"
#include "twistor/xray.hpp"

namespace twistor {

cplx xray_Ik_on_chord(const ConformalMetric& m, const ModeField& a, const GeodesicRecord& rec,
                      int n_quad) {
  const int k = a.the_mode();
  const double tau = rec.exit_time;
  if (tau <= 0.0) return 0.0;

  if (a.weight == FieldWeight::smooth) {
    // composite Gauss-Legendre; panel length tied to the disk scale
    const int panels = std::min(64, std::max(2, (int)std::ceil(tau / (0.2 * m.R))));
    const QuadRule gl = gauss_legendre(10);
    cplx acc = 0.0;
    for (int pnl = 0; pnl < panels; ++pnl) {
      const double t0 = tau * pnl / panels, t1 = tau * (pnl + 1) / panels;
      for (size_t q = 0; q < gl.nodes.size(); ++q) {
        const double t = 0.5 * (t0 + t1) + 0.5 * (t1 - t0) * gl.nodes[q];
        const PhasePoint p = rec.eval(t);
        acc += gl.weights[q] * 0.5 * (t1 - t0) * eval_mode(a, 0, p.z) *
               std::exp(cplx(0.0, k * p.theta));
      }
    }
    return acc;
  }

  // rho_half: t = u tau; the factor sqrt(u(1-u)/rho) stays smooth along the
  // chord while the 1/sqrt(u(1-u)) half goes into the quadrature weight
  const QuadRule gc = gauss_chebyshev01(n_quad);
  cplx acc = 0.0;
  for (size_t q = 0; q < gc.nodes.size(); ++q) {
    const double u = gc.nodes[q];
    const PhasePoint p = rec.eval(u * tau);
    const double rho_z = rho(m, p.z);
    const double ratio = u * (1.0 - u) / rho_z;
    acc += gc.weights[q] * eval_mode(a, 0, p.z) * std::exp(cplx(0.0, k * p.theta)) * tau *
           std::sqrt(std::max(ratio, 0.0));
  }
  return acc;
}

cplx xray_Ik(const ConformalMetric& m, const ModeField& a, const BoundaryPoint& b, int n_quad) {
  if (std::abs(std::abs(b.alpha) - 0.5 * M_PI) <= 1e-9) {
    if (a.weight == FieldWeight::rho_half)
      throw DomainError("xray_Ik: glancing chord with rho^{-1/2} weight");
    return 0.0;
  }
  return xray_Ik_on_chord(m, a, chord(m, b), n_quad);
}

BoundaryField xray_boundary(const ConformalMetric& m, const ModeField& a,
                            const BoundaryGrid& bg, int n_quad) {
  BoundaryField h = make_boundary_field(bg);
  parallel_for(bg.n_alpha, [&](int ia) {
    const double al = bg.alpha(ia);
    for (int j = 0; j < bg.n_omega; ++j)
      h.at(ia, j) = xray_Ik(m, a, {bg.omega(j), al}, n_quad);
  });
  return h;
}

cplx sharp_extend(const ConformalMetric& m, const BoundaryField& h, const PhasePoint& p) {
  const BoundaryPoint b = backward_exit(m, p);
  return eval_boundary(h, b.omega, b.alpha);
}

double symplectic_norm(const ConformalMetric& m, const BoundaryField& h) {
  const BoundaryGrid& g = h.grid;
  require(g.n_alpha >= 3 && g.n_alpha % 2 == 1, "symplectic_norm: need an odd alpha count");
  const double ds = 2.0 / (g.n_alpha - 1);
  const double dw = 2.0 * M_PI / g.n_omega;
  double acc = 0.0;
  for (int ia = 0; ia < g.n_alpha; ++ia) {
    const double s = g.s_node(ia);
    const double al = g.alpha(ia);
    const double dalpha_ds = g.alpha_max() * 0.5 * M_PI * std::cos(0.5 * M_PI * s);
    const double simpson = (ia == 0 || ia == g.n_alpha - 1) ? 1.0 : (ia % 2 == 1 ? 4.0 : 2.0);
    double row = 0.0;
    for (int j = 0; j < g.n_omega; ++j) {
      const cplx zb = m.R * std::polar(1.0, g.omega(j));
      row += std::norm(h.at(ia, j)) * m.R * std::exp(m.sigma(zb));
    }
    acc += simpson * (ds / 3.0) * dalpha_ds * std::cos(al) * row * dw;
  }
  return std::sqrt(std::max(acc, 0.0));
}

}  // namespace twistor
