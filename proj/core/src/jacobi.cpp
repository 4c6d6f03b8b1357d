#include <cmath>

#include "twistor/errors.hpp"
#include "twistor/grid.hpp"
#include "twistor/jacobi.hpp"

namespace twistor {

JacobiSolution jacobi_along(const ConformalMetric& m, const GeodesicRecord& rec) {
  JacobiSolution out;
  const double T = rec.hit_boundary ? rec.exit_time : rec.t.back();
  if (T <= 0.0) {
    out.J_exit = 0.0;
    out.dJ_exit = 1.0;
    return out;
  }
  // fixed-step RK4 on (J, J'); curvature replayed from the dense output
  const int n = std::max(256, (int)rec.steps.size() * 8);
  const double h = T / n;
  double J = 0.0, dJ = 1.0;
  auto K_at = [&](double t) { return gauss_curvature(m, rec.eval(t).z); };
  double prevJ = J;
  for (int i = 0; i < n; ++i) {
    const double t0 = i * h;
    const double K1 = K_at(t0), K2 = K_at(t0 + 0.5 * h), K3 = K2, K4 = K_at(t0 + h);
    const double j1 = dJ, dj1 = -K1 * J;
    const double j2 = dJ + 0.5 * h * dj1, dj2 = -K2 * (J + 0.5 * h * j1);
    const double j3 = dJ + 0.5 * h * dj2, dj3 = -K3 * (J + 0.5 * h * j2);
    const double j4 = dJ + h * dj3, dj4 = -K4 * (J + h * j3);
    prevJ = J;
    J += h / 6.0 * (j1 + 2 * j2 + 2 * j3 + j4);
    dJ += h / 6.0 * (dj1 + 2 * dj2 + 2 * dj3 + dj4);
    if (out.positive && i > 0 && J <= 0.0) {
      out.positive = false;
      // linear interpolation of the crossing inside the substep
      const double frac = (prevJ > 0.0 && prevJ - J != 0.0) ? prevJ / (prevJ - J) : 0.0;
      out.first_zero = t0 + frac * h;
    }
  }
  out.J_exit = J;
  out.dJ_exit = dJ;
  return out;
}

SimpleReport check_simple(const ConformalMetric& m, const GridSpec& grid) {
  (void)grid;
  SimpleReport rep;

  // boundary convexity: conformal geodesic curvature of |z| = R,
  // k_g = e^{-sigma} (1/R + d_r sigma), sampled around the rim
  rep.convex = true;
  const int n_b = 64;
  for (int j = 0; j < n_b; ++j) {
    const double w = 2.0 * M_PI * j / n_b;
    const cplx e(std::cos(w), std::sin(w));
    const cplx zb = m.R * e;
    const double dr_sigma = 2.0 * (e * m.dz_sigma(zb)).real();
    const double kg = m.inv_conformal(zb) * (1.0 / m.R + dr_sigma);
    if (!(kg > 0.0)) rep.convex = false;
  }

  // conjugate points: Jacobi fields along a fan of chords must stay positive
  rep.no_conjugate = true;
  const int n_omega = 12;
  const double alphas[] = {0.0, 0.35, 0.7, 1.0, 1.25, -0.35, -0.7, -1.0, -1.25};
  for (int j = 0; j < n_omega && rep.no_conjugate; ++j) {
    for (double al : alphas) {
      BoundaryPoint b{2.0 * M_PI * j / n_omega, al};
      GeodesicRecord rec;
      try {
        rec = chord(m, b);
      } catch (const NumericalError&) {
        rep.no_conjugate = false;  // trapped counts against simplicity
        break;
      }
      if (!jacobi_along(m, rec).positive) {
        rep.no_conjugate = false;
        break;
      }
    }
  }
  return rep;
}

JacobiProfile jacobi_profile(const std::function<double(double, double)>& K, double eps,
                             int n_s, int n_theta) {
  require(eps > 0.0, "jacobi_profile: eps must be positive");
  require(n_s >= 8 && n_theta >= 1, "jacobi_profile: grid too small");
  JacobiProfile out;
  out.n_s = n_s;
  out.n_theta = n_theta;
  out.eps = eps;
  out.f.assign((size_t)n_theta * (n_s + 1), 0.0);
  const double h = 1.0 / n_s;
  double defect = 0.0;
  for (int jt = 0; jt < n_theta; ++jt) {
    const double th = 2.0 * M_PI * jt / n_theta;
    double f = 0.0, df = 1.0;
    out.f[(size_t)jt * (n_s + 1)] = 0.0;
    for (int i = 0; i < n_s; ++i) {
      const double s0 = i * h;
      auto Keps = [&](double s) { return eps * eps * K(eps * s, th); };
      const double K1 = Keps(s0), K2 = Keps(s0 + 0.5 * h), K4 = Keps(s0 + h);
      const double j1 = df, dj1 = -K1 * f;
      const double j2 = df + 0.5 * h * dj1, dj2 = -K2 * (f + 0.5 * h * j1);
      const double j3 = df + 0.5 * h * dj2, dj3 = -K2 * (f + 0.5 * h * j2);
      const double j4 = df + h * dj3, dj4 = -K4 * (f + h * j3);
      f += h / 6.0 * (j1 + 2 * j2 + 2 * j3 + j4);
      df += h / 6.0 * (dj1 + 2 * dj2 + 2 * dj3 + dj4);
      out.f[(size_t)jt * (n_s + 1) + i + 1] = f;
      defect = std::max(defect, std::abs(f - (s0 + h)));
    }
  }
  out.defect = defect;
  return out;
}

}  // namespace twistor
