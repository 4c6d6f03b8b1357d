#pragma once

#include <complex>
#include <functional>

namespace twistor {

using cplx = std::complex<double>;

enum class MetricKind { euclidean, constant_curvature, custom };

// Conformally Euclidean metric e^{2 sigma} |dz|^2 on the disk |z| <= R.
// sigma must stay evaluable slightly outside the disk (factor ~1.25 in R):
// the flow integrator may overshoot the boundary before the event bisection
// pulls the state back.
struct ConformalMetric {
  MetricKind kind = MetricKind::euclidean;
  double kappa = 0.0;  // constant_curvature only; Gauss curvature is 4*kappa
  double R = 1.0;
  bool rotationally_symmetric = true;

  std::function<double(cplx)> sigma_fn;    // custom only
  std::function<cplx(cplx)> dz_sigma_fn;   // custom only; empty -> FD fallback

  double sigma(cplx z) const;
  cplx dz_sigma(cplx z) const;

  // ratio of Euclidean to metric speed, e^{-sigma}
  double inv_conformal(cplx z) const { return std::exp(-sigma(z)); }
};

ConformalMetric euclidean_metric(double R);

// |kappa| R^2 < 1 required: this is exactly the simplicity range of the
// constant-curvature family (curvature 4*kappa).
ConformalMetric constant_curvature_metric(double kappa, double R);

ConformalMetric custom_metric(std::function<double(cplx)> sigma,
                              std::function<cplx(cplx)> dz_sigma,
                              double R, bool rotationally_symmetric);

// Gauss curvature K(z) = -4 e^{-2 sigma} d_z d_zbar sigma. Custom metrics
// differentiate dz_sigma by central differences (step 1e-5 * R).
double gauss_curvature(const ConformalMetric& m, cplx z);

// Boundary defining function rho(z) = R^2 - |z|^2.
inline double rho(const ConformalMetric& m, cplx z) { return m.R * m.R - std::norm(z); }

struct SimpleReport {
  bool convex = false;
  bool no_conjugate = false;
  bool simple() const { return convex && no_conjugate; }
};

struct GridSpec;  // grid.hpp

// Simplicity screening: boundary convexity via the conformal geodesic
// curvature of |z| = R, conjugate points via Jacobi fields along sampled
// chords. Report-only; implemented with the flow integrator.
SimpleReport check_simple(const ConformalMetric& m, const GridSpec& grid);

}  // namespace twistor
