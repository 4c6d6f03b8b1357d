#pragma once

#include <array>
#include <vector>

#include "twistor/metric.hpp"

namespace twistor {

// Point of the unit sphere bundle in the (z, theta) trivialization; the unit
// vector is e^{-sigma(z)} e^{i theta}. theta is kept unwrapped (plain real)
// through integration so the angular ODE stays smooth.
struct PhasePoint {
  cplx z;
  double theta = 0.0;
};

// Influx boundary parametrization: z = R e^{i omega}, direction
// theta = omega + alpha + pi. |alpha| < pi/2 points inward; |alpha| = pi/2
// is the glancing set. Scattering results reuse this struct with alpha in
// the outgoing band (around pi - alpha_in).
struct BoundaryPoint {
  double omega = 0.0;
  double alpha = 0.0;
};

struct FlowTangent {
  cplx dz;
  double dtheta = 0.0;
};

// Geodesic ODE in the trivialization:
//   dz/dt     = e^{-sigma} e^{i theta}
//   dtheta/dt = -2 e^{-sigma} Im(e^{i theta} dz_sigma)
// The sign is pinned by the constant-curvature scattering check in the test
// suite; do not flip it without re-running that gate.
FlowTangent flow_ode(const ConformalMetric& m, const PhasePoint& p);

struct GeodesicRecord {
  // accepted integration samples, strictly increasing in t starting at 0
  std::vector<double> t;
  std::vector<PhasePoint> state;
  double exit_time = 0.0;
  bool hit_boundary = false;

  // dense-output coefficients of each accepted step, for continuous replay
  struct Step {
    double t0 = 0.0, h = 0.0;
    std::array<std::array<double, 3>, 5> rcont{};  // state components (x, y, theta)
  };
  std::vector<Step> steps;

  PhasePoint eval(double tq) const;
  const PhasePoint& final_state() const { return state.back(); }
};

// Adaptive Dormand-Prince 5(4) with dense output and a boundary event on
// |z|^2 - R^2 (bisected to 1e-12). Stops at the first boundary hit or at
// t_max, whichever comes first. t_max <= 0 selects an automatic trapping cap
// from the metric's conformal factor.
GeodesicRecord integrate(const ConformalMetric& m, const PhasePoint& p, double t_max,
                         double tol = 1e-10);

enum class FlowDirection { forward, backward };

// Time to the boundary along the flow (forward) or its reverse (backward),
// always reported as a nonnegative number. Throws NumericalError if the
// trapping cap is reached first.
double exit_time(const ConformalMetric& m, const PhasePoint& p,
                 FlowDirection dir = FlowDirection::forward);

PhasePoint boundary_to_phase(double R, const BoundaryPoint& b);

// Full influx chord of b, t in [0, tau]. Glancing input (|alpha| within
// 1e-9 of pi/2) degenerates to the single boundary point with tau = 0.
GeodesicRecord chord(const ConformalMetric& m, const BoundaryPoint& b);

// Scattering relation. The result is the exit point in the same angular
// conventions, so its alpha sits in the outgoing band: for constant
// curvature kappa the closed form is
//   (omega, alpha) -> (omega + pi + 2 s(alpha), pi - alpha),
//   s(alpha) = atan(((1 - kappa R^2)/(1 + kappa R^2)) tan alpha),
// with both output angles taken mod 2 pi.
BoundaryPoint scattering(const ConformalMetric& m, const BoundaryPoint& b);

// Point at parameter fraction u of the chord of b (u in [0, 1]).
PhasePoint upsilon(const ConformalMetric& m, const BoundaryPoint& b, double u);

// Influx boundary point whose chord passes through p; flows backward. A
// point already on the rim and pointing inward is returned as itself.
BoundaryPoint backward_exit(const ConformalMetric& m, const PhasePoint& p);

// wrap to (-pi, pi]
double wrap_angle(double a);

}  // namespace twistor
