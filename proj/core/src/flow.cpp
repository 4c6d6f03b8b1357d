#include <algorithm>
#include <cmath>

#include "twistor/errors.hpp"
#include "twistor/flow.hpp"

namespace twistor {

double wrap_angle(double a) {
  double w = std::remainder(a, 2.0 * M_PI);
  if (w <= -M_PI) w += 2.0 * M_PI;
  return w;
}

FlowTangent flow_ode(const ConformalMetric& m, const PhasePoint& p) {
  const double a = m.inv_conformal(p.z);
  const double c = std::cos(p.theta), s = std::sin(p.theta);
  const cplx ds = m.dz_sigma(p.z);
  // Im(e^{i theta} dz_sigma) = cos(theta) Im + sin(theta) Re
  return {cplx(a * c, a * s), -2.0 * a * (c * ds.imag() + s * ds.real())};
}

namespace {

void rhs(const ConformalMetric& m, const double y[3], double f[3]) {
  const cplx z(y[0], y[1]);
  const double a = m.inv_conformal(z);
  const double c = std::cos(y[2]), s = std::sin(y[2]);
  const cplx ds = m.dz_sigma(z);
  f[0] = a * c;
  f[1] = a * s;
  f[2] = -2.0 * a * (c * ds.imag() + s * ds.real());
}

// Dormand-Prince 5(4) tableau
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// embedded error weights (5th order minus 4th order solution)
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// dense-output weights
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

void dense_eval(const GeodesicRecord::Step& st, double tq, double out[3]) {
  const double th = (tq - st.t0) / st.h;
  const double th1 = 1.0 - th;
  for (int i = 0; i < 3; ++i) {
    const auto& r = st.rcont;
    out[i] = r[0][i] + th * (r[1][i] + th1 * (r[2][i] + th * (r[3][i] + th1 * r[4][i])));
  }
}

double g_dense(const GeodesicRecord::Step& st, double tq, double R2) {
  double y[3];
  dense_eval(st, tq, y);
  return y[0] * y[0] + y[1] * y[1] - R2;
}

// Bisect the boundary crossing of |z|^2 - R^2 inside one step. t_lo has
// g < 0, t_hi has g >= 0 (or is the first candidate).
double bisect_event(const GeodesicRecord::Step& st, double t_lo, double t_hi, double R2,
                    double gtol) {
  double lo = t_lo, hi = t_hi;
  double root = hi;
  for (int it = 0; it < 120; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g_dense(st, mid, R2);
    if (std::abs(gm) <= gtol) {
      root = mid;
      break;
    }
    if (gm < 0.0)
      lo = mid;
    else
      hi = mid;
    root = hi;
    if (hi - lo <= 1e-16 * (1.0 + std::abs(hi))) break;
  }
  return root;
}

double trapping_cap(const ConformalMetric& m) {
  double emax = 0.0;
  for (int i = 0; i <= 24; ++i) {
    const double r = m.R * i / 24.0;
    for (int j = 0; j < 8; ++j) {
      const double ph = 2.0 * M_PI * j / 8.0;
      emax = std::max(emax, std::exp(m.sigma(cplx(r * std::cos(ph), r * std::sin(ph)))));
    }
  }
  return 25.0 * m.R * emax;
}

}  // namespace

PhasePoint GeodesicRecord::eval(double tq) const {
  if (steps.empty()) return state.front();
  const double t_end = t.back();
  if (tq <= 0.0) tq = 0.0;
  if (tq >= t_end) tq = t_end;
  // last step whose start is <= tq
  size_t lo = 0, hi = steps.size() - 1;
  while (lo < hi) {
    const size_t mid = (lo + hi + 1) / 2;
    if (steps[mid].t0 <= tq)
      lo = mid;
    else
      hi = mid - 1;
  }
  double y[3];
  dense_eval(steps[lo], tq, y);
  return {cplx(y[0], y[1]), y[2]};
}

GeodesicRecord integrate(const ConformalMetric& m, const PhasePoint& p, double t_max,
                         double tol) {
  const double R = m.R, R2 = R * R;
  require(std::abs(p.z) <= R * (1.0 + 1e-12), "integrate: start outside the disk");
  if (t_max <= 0.0) t_max = trapping_cap(m);
  if (tol <= 0.0) tol = 1e-10;
  const double gtol = 1e-12 * std::max(1.0, R2);
  const double g_arm = 1e-12 * R2;

  GeodesicRecord rec;
  double y[3] = {p.z.real(), p.z.imag(), p.theta};
  double k[7][3];
  rhs(m, y, k[0]);

  rec.t.push_back(0.0);
  rec.state.push_back(p);

  // step-size setup: cap Euclidean motion per step, and for rim starts
  // respect the chord-time scale so near-glancing chords are resolved
  const double h_max = 0.25 * R;
  const double sp = std::hypot(k[0][0], k[0][1]);
  double h = std::min(h_max, R / (8.0 * std::max(sp, 1e-12)));
  double g0 = y[0] * y[0] + y[1] * y[1] - R2;
  bool armed = g0 < -g_arm;
  if (!armed) {
    const double ca =
        std::max(-(y[0] * k[0][0] + y[1] * k[0][1]) / (R * std::max(sp, 1e-12)), 1e-5);
    h = std::min(h, 0.5 * R * ca / std::max(sp, 1e-12));
  }
  h = std::min(h, 0.5 / std::max(std::abs(k[0][2]), 1e-12));
  h = std::min(h, t_max);

  double t = 0.0;
  double ytmp[3], ynew[3];
  while (t < t_max) {
    if (h < 1e-14 * std::max(1.0, std::abs(t)))
      throw NumericalError("integrate: step-size underflow");
    h = std::min(h, t_max - t);

    for (int i = 0; i < 3; ++i) ytmp[i] = y[i] + h * a21 * k[0][i];
    rhs(m, ytmp, k[1]);
    for (int i = 0; i < 3; ++i) ytmp[i] = y[i] + h * (a31 * k[0][i] + a32 * k[1][i]);
    rhs(m, ytmp, k[2]);
    for (int i = 0; i < 3; ++i)
      ytmp[i] = y[i] + h * (a41 * k[0][i] + a42 * k[1][i] + a43 * k[2][i]);
    rhs(m, ytmp, k[3]);
    for (int i = 0; i < 3; ++i)
      ytmp[i] = y[i] + h * (a51 * k[0][i] + a52 * k[1][i] + a53 * k[2][i] + a54 * k[3][i]);
    rhs(m, ytmp, k[4]);
    for (int i = 0; i < 3; ++i)
      ytmp[i] = y[i] + h * (a61 * k[0][i] + a62 * k[1][i] + a63 * k[2][i] + a64 * k[3][i] +
                            a65 * k[4][i]);
    rhs(m, ytmp, k[5]);
    for (int i = 0; i < 3; ++i)
      ynew[i] = y[i] + h * (b1 * k[0][i] + b3 * k[2][i] + b4 * k[3][i] + b5 * k[4][i] +
                            b6 * k[5][i]);
    rhs(m, ynew, k[6]);

    double err = 0.0;
    for (int i = 0; i < 3; ++i) {
      const double ei = h * (e1 * k[0][i] + e3 * k[2][i] + e4 * k[3][i] + e5 * k[4][i] +
                             e6 * k[5][i] + e7 * k[6][i]);
      const double sc = tol + tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      err += (ei / sc) * (ei / sc);
    }
    err = std::sqrt(err / 3.0);

    if (err > 1.0) {
      h *= std::max(0.1, 0.9 * std::pow(err, -0.2));
      continue;
    }

    GeodesicRecord::Step st;
    st.t0 = t;
    st.h = h;
    for (int i = 0; i < 3; ++i) {
      const double dy = ynew[i] - y[i];
      st.rcont[0][i] = y[i];
      st.rcont[1][i] = dy;
      st.rcont[2][i] = h * k[0][i] - dy;
      st.rcont[3][i] = dy - h * k[6][i] - st.rcont[2][i];
      st.rcont[4][i] = h * (d1 * k[0][i] + d3 * k[2][i] + d4 * k[3][i] + d5 * k[4][i] +
                            d6 * k[5][i] + d7 * k[6][i]);
    }

    const double g_end = ynew[0] * ynew[0] + ynew[1] * ynew[1] - R2;
    double t_cross = -1.0;
    if (!armed) {
      // starting on the rim: locate where the orbit is decisively interior
      // before trusting a boundary event; also handles whole chords that
      // fit in a single step
      double t_neg = -1.0;
      const int nscan = 16;
      for (int q = 1; q <= nscan; ++q) {
        const double ts = t + h * q / (double)nscan;
        const double gs = (q == nscan) ? g_end : g_dense(st, ts, R2);
        if (t_neg < 0.0) {
          if (gs < -g_arm) t_neg = ts;
        } else if (gs >= 0.0) {
          t_cross = bisect_event(st, t_neg, ts, R2, gtol);
          break;
        }
      }
      if (t_neg >= 0.0) armed = true;
      if (!armed && g_end > g_arm) {
        // never entered the disk: outward or glancing start, exit at once
        rec.exit_time = 0.0;
        rec.hit_boundary = true;
        return rec;
      }
    } else if (g_end >= 0.0) {
      // scan for the first crossing inside the step (guards grazing arcs)
      double t_lo = t;
      const int nscan = 8;
      for (int q = 1; q <= nscan; ++q) {
        const double ts = t + h * q / (double)nscan;
        const double gs = (q == nscan) ? g_end : g_dense(st, ts, R2);
        if (gs >= 0.0) {
          t_cross = bisect_event(st, t_lo, ts, R2, gtol);
          break;
        }
        t_lo = ts;
      }
    }

    rec.steps.push_back(st);
    if (t_cross >= 0.0) {
      double yb[3];
      dense_eval(st, t_cross, yb);
      rec.t.push_back(t_cross);
      rec.state.push_back({cplx(yb[0], yb[1]), yb[2]});
      rec.exit_time = t_cross;
      rec.hit_boundary = true;
      return rec;
    }

    t += h;
    for (int i = 0; i < 3; ++i) {
      y[i] = ynew[i];
      k[0][i] = k[6][i];
    }
    rec.t.push_back(t);
    rec.state.push_back({cplx(y[0], y[1]), y[2]});

    const double fac = (err == 0.0) ? 5.0 : std::min(5.0, std::max(0.2, 0.9 * std::pow(err, -0.2)));
    h = std::min(h * fac, h_max);
  }

  rec.exit_time = t;
  rec.hit_boundary = false;
  return rec;
}

double exit_time(const ConformalMetric& m, const PhasePoint& p, FlowDirection dir) {
  PhasePoint q = p;
  if (dir == FlowDirection::backward) q.theta += M_PI;
  GeodesicRecord rec = integrate(m, q, -1.0);
  if (!rec.hit_boundary)
    throw NumericalError("exit_time: no boundary hit before the trapping cap");
  return rec.exit_time;
}

PhasePoint boundary_to_phase(double R, const BoundaryPoint& b) {
  return {cplx(R * std::cos(b.omega), R * std::sin(b.omega)), b.omega + b.alpha + M_PI};
}

GeodesicRecord chord(const ConformalMetric& m, const BoundaryPoint& b) {
  const PhasePoint p0 = boundary_to_phase(m.R, b);
  if (std::abs(std::abs(b.alpha) - 0.5 * M_PI) <= 1e-9) {
    GeodesicRecord rec;
    rec.t.push_back(0.0);
    rec.state.push_back(p0);
    rec.exit_time = 0.0;
    rec.hit_boundary = true;
    return rec;
  }
  require(std::abs(b.alpha) < 0.5 * M_PI, "chord: alpha outside the influx range");
  GeodesicRecord rec = integrate(m, p0, -1.0);
  if (!rec.hit_boundary) throw NumericalError("chord: no boundary hit before the trapping cap");
  return rec;
}

BoundaryPoint scattering(const ConformalMetric& m, const BoundaryPoint& b) {
  require(std::abs(b.alpha) < 0.5 * M_PI - 1e-9, "scattering: glancing input");
  const GeodesicRecord rec = chord(m, b);
  const PhasePoint pe = rec.final_state();
  const double omega = std::atan2(pe.z.imag(), pe.z.real());
  return {omega, wrap_angle(pe.theta - omega - M_PI)};
}

PhasePoint upsilon(const ConformalMetric& m, const BoundaryPoint& b, double u) {
  require(u >= -1e-12 && u <= 1.0 + 1e-12, "upsilon: u outside [0, 1]");
  if (std::abs(std::abs(b.alpha) - 0.5 * M_PI) <= 1e-9) return boundary_to_phase(m.R, b);
  const GeodesicRecord rec = chord(m, b);
  return rec.eval(u * rec.exit_time);
}

BoundaryPoint backward_exit(const ConformalMetric& m, const PhasePoint& p) {
  const double R = m.R;
  if (std::abs(p.z) >= R * (1.0 - 1e-12)) {
    const double omega = std::atan2(p.z.imag(), p.z.real());
    const double a = wrap_angle(p.theta - omega - M_PI);
    if (std::abs(a) <= 0.5 * M_PI + 1e-9)
      return {omega, std::clamp(a, -0.5 * M_PI, 0.5 * M_PI)};
  }
  GeodesicRecord rec = integrate(m, {p.z, p.theta + M_PI}, -1.0);
  if (!rec.hit_boundary)
    throw NumericalError("backward_exit: no boundary hit before the trapping cap");
  const PhasePoint pe = rec.final_state();
  const double omega = std::atan2(pe.z.imag(), pe.z.real());
  // pe.theta is the reversed direction; the chord's forward direction there
  // is pe.theta - pi
  const double a = wrap_angle(pe.theta - M_PI - omega - M_PI);
  require(std::abs(a) <= 0.5 * M_PI + 1e-6, "backward_exit: recovered point not inward");
  return {omega, std::clamp(a, -0.5 * M_PI, 0.5 * M_PI)};
}

}  // namespace twistor
