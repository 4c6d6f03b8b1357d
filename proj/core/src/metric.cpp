#include "twistor/metric.hpp"

#include <cmath>

#include "twistor/errors.hpp"

namespace twistor {

double ConformalMetric::sigma(cplx z) const {
  switch (kind) {
    case MetricKind::euclidean:
      return 0.0;
    case MetricKind::constant_curvature:
      return -std::log(1.0 + kappa * std::norm(z));
    case MetricKind::custom:
      return sigma_fn(z);
  }
  return 0.0;
}

cplx ConformalMetric::dz_sigma(cplx z) const {
  switch (kind) {
    case MetricKind::euclidean:
      return 0.0;
    case MetricKind::constant_curvature:
      return -kappa * std::conj(z) / (1.0 + kappa * std::norm(z));
    case MetricKind::custom: {
      if (dz_sigma_fn) return dz_sigma_fn(z);
      // d_z = (d_x - i d_y)/2 on the real-valued sigma
      const double h = 1e-6 * R;
      const double sx = (sigma_fn(z + h) - sigma_fn(z - h)) / (2.0 * h);
      const double sy = (sigma_fn(z + cplx(0, h)) - sigma_fn(z - cplx(0, h))) / (2.0 * h);
      return 0.5 * cplx(sx, -sy);
    }
  }
  return 0.0;
}

ConformalMetric euclidean_metric(double R) {
  require(R > 0, "euclidean_metric: R > 0");
  ConformalMetric m;
  m.kind = MetricKind::euclidean;
  m.R = R;
  m.rotationally_symmetric = true;
  return m;
}

ConformalMetric constant_curvature_metric(double kappa, double R) {
  require(R > 0, "constant_curvature_metric: R > 0");
  if (std::abs(kappa) * R * R >= 1.0)
    throw DomainError("constant_curvature_metric: |kappa| R^2 >= 1 is not a simple disk");
  ConformalMetric m;
  m.kind = (kappa == 0.0) ? MetricKind::euclidean : MetricKind::constant_curvature;
  m.kappa = kappa;
  m.R = R;
  m.rotationally_symmetric = true;
  return m;
}

ConformalMetric custom_metric(std::function<double(cplx)> sigma,
                              std::function<cplx(cplx)> dz_sigma,
                              double R, bool rotationally_symmetric) {
  require(R > 0, "custom_metric: R > 0");
  require(static_cast<bool>(sigma), "custom_metric: sigma callable required");
  ConformalMetric m;
  m.kind = MetricKind::custom;
  m.R = R;
  m.rotationally_symmetric = rotationally_symmetric;
  m.sigma_fn = std::move(sigma);
  m.dz_sigma_fn = std::move(dz_sigma);
  return m;
}

double gauss_curvature(const ConformalMetric& m, cplx z) {
  require(std::abs(z) <= m.R * (1.0 + 1e-12), "gauss_curvature: point outside disk");
  if (m.kind == MetricKind::euclidean) return 0.0;
  if (m.kind == MetricKind::constant_curvature) return 4.0 * m.kappa;
  // Laplacian sigma = 4 d_zbar d_z sigma; differentiate the supplied (or FD)
  // first derivative once more.  d_zbar f = (d_x f + i d_y f)/2 on f = d_z sigma,
  // and the result is real for real sigma, so keep the real part.
  const double h = 1e-5 * m.R;
  const cplx fx = (m.dz_sigma(z + h) - m.dz_sigma(z - h)) / (2.0 * h);
  const cplx fy = (m.dz_sigma(z + cplx(0, h)) - m.dz_sigma(z - cplx(0, h))) / (2.0 * h);
  const double lap = 4.0 * 0.5 * (fx + cplx(0, 1) * fy).real();
  return -lap * std::exp(-2.0 * m.sigma(z));
}

}  // namespace twistor
