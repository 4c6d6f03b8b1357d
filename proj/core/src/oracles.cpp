#include <cmath>

#include "twistor/errors.hpp"
#include "twistor/oracles.hpp"
#include "twistor/quadrature.hpp"

namespace twistor {

static void check_params(const CCParams& p) {
  require(p.R > 0.0, "CCParams: R must be positive");
  require(std::abs(p.kappa) * p.R * p.R < 1.0, "CCParams: |kappa| R^2 must be < 1");
}

std::pair<cplx, cplx> beta_cc(const CCParams& p, cplx z, cplx mu) {
  check_params(p);
  const cplx zb = std::conj(z);
  const cplx den = 1.0 + p.kappa * zb * zb * mu * mu;
  const cplx w = (z - mu * mu * zb) / den;
  const cplx xi = mu * (1.0 + p.kappa * std::norm(z)) / den;
  return {w, xi};
}

double m_func(double y) {
  require(y > -0.25, "m_func: y must exceed -1/4");
  return 1.0 / (0.5 + std::sqrt(y + 0.25));
}

bool image_membership(double kappa, double R, cplx w, cplx xi) {
  const cplx s = kappa * w * w + xi * xi;
  if (std::abs(s) >= 1.0) return false;
  const cplx a = (w + std::conj(w) * s) / (1.0 - std::norm(s));
  return std::abs(a) < R / (1.0 - kappa * R * R);
}

std::pair<cplx, cplx> beta_cc_inverse(const CCParams& p, cplx w, cplx xi) {
  check_params(p);
  require(image_membership(p.kappa, p.R, w, xi), "beta_cc_inverse: point outside the image");
  const cplx s = p.kappa * w * w + xi * xi;
  const cplx a = (w + std::conj(w) * s) / (1.0 - std::norm(s));
  const cplx z = a * m_func(p.kappa * std::norm(a));
  const cplx mu = xi / (1.0 + p.kappa * w * std::conj(z));
  return {z, mu};
}

double lambda_min_bound(const CCParams& p) {
  check_params(p);
  const double t = 1.0 - std::abs(p.kappa) * p.R * p.R;
  return t * t / (10.0 + 4.0 * p.R * p.R);
}

double scattering_cc(const CCParams& p, double alpha) {
  check_params(p);
  require(std::abs(alpha) < 0.5 * M_PI, "scattering_cc: glancing alpha");
  const double kR2 = p.kappa * p.R * p.R;
  return std::atan((1.0 - kR2) / (1.0 + kR2) * std::tan(alpha));
}

std::pair<cplx, cplx> vertex_cc(const CCParams& p, double omega, double alpha) {
  check_params(p);
  const double kR2 = p.kappa * p.R * p.R;
  const cplx e2ia = std::polar(1.0, 2.0 * alpha);
  const cplx den = 1.0 + kR2 * e2ia;
  const cplx w = p.R * std::polar(1.0, omega) * (1.0 - e2ia) / den;
  const cplx xi = std::polar(1.0, omega + alpha + M_PI) * (1.0 + kR2) / den;
  return {w, xi};
}

double det_scan_min_cc(const CCParams& p) {
  check_params(p);
  if (p.kappa >= 0.0) return 1.0;
  const double aR2 = -p.kappa * p.R * p.R;
  const double q = (1.0 - aR2) / (1.0 + aR2);
  return q * q;
}

double totally_real_min_cc(const CCParams& p) {
  check_params(p);
  const double kR2 = p.kappa * p.R * p.R;
  const double num = 16.0 * p.R * p.R * (1.0 + kR2) * (1.0 + kR2);
  const double dmax = 1.0 + std::abs(kR2);  // max |1 + kappa R^2 e^{2 i alpha}|
  return num / (dmax * dmax * dmax * dmax);
}

double normal_kernel_euclidean(cplx x, cplx y) {
  const double d = std::abs(x - y);
  require(d > 0.0, "normal_kernel_euclidean: coincident points");
  return 2.0 / d;
}

double normal_one_euclidean(double R, double r) {
  require(R > 0.0 && r >= 0.0 && r < R, "normal_one_euclidean: need 0 <= r < R");
  // circle average of full chord lengths 2 sqrt(R^2 - r^2 sin^2 psi);
  // integrand is smooth and periodic, so the trapezoid rule converges
  // spectrally
  const int n = 512;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double psi = 2.0 * M_PI * i / n;
    const double sn = r * std::sin(psi);
    acc += 2.0 * std::sqrt(R * R - sn * sn);
  }
  return acc * 2.0 * M_PI / n;
}

double kernel_route_normal0(const std::function<double(cplx)>& f, double R, cplx x, int n_phi,
                            int n_s) {
  require(std::abs(x) < R, "kernel_route_normal0: x must be interior");
  const QuadRule gl = gauss_legendre(n_s);
  double acc = 0.0;
  for (int i = 0; i < n_phi; ++i) {
    const double phi = 2.0 * M_PI * i / n_phi;
    const cplx v(std::cos(phi), std::sin(phi));
    const double xv = x.real() * v.real() + x.imag() * v.imag();
    const double ell = -xv + std::sqrt(R * R - std::norm(x) + xv * xv);
    // int_0^ell 2 f(x + s v) ds: the 1/|x-y| kernel cancels the polar
    // Jacobian, leaving a smooth radial integral
    double line = 0.0;
    for (int q = 0; q < n_s; ++q) {
      const double s = 0.5 * ell * (gl.nodes[q] + 1.0);
      line += gl.weights[q] * f(x + s * v);
    }
    acc += 2.0 * line * 0.5 * ell;
  }
  return acc * 2.0 * M_PI / n_phi;
}

double jacobi_defect_cc(double kappa, double eps) {
  require(eps > 0.0, "jacobi_defect_cc: eps must be positive");
  if (kappa == 0.0) return 0.0;
  const double c = 2.0 * std::sqrt(std::abs(kappa)) * eps;
  // f(s) - s is monotone in s for both signs, so the sup sits at s = 1
  if (kappa > 0.0) return 1.0 - std::sin(c) / c;
  return std::sinh(c) / c - 1.0;
}

cplx oracle_mode(const CCParams& p, int comp, int k, cplx z) {
  const cplx zb = std::conj(z);
  const double zz = std::norm(z);
  if (comp == 0) {
    if (k == 0) return z;
    if (k < 2 || k % 2 != 0) return 0.0;
    const int j = k / 2;
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    return sign * std::pow(p.kappa, j - 1) * std::pow(zb, 2 * j - 1) * (1.0 + p.kappa * zz);
  }
  if (k < 1 || k % 2 != 1) return 0.0;
  const int j = (k - 1) / 2;
  return (1.0 + p.kappa * zz) * std::pow(-p.kappa * zb * zb, j);
}

cplx oracle_mode_dz(const CCParams& p, int comp, int k, cplx z) {
  const cplx zb = std::conj(z);
  if (comp == 0) {
    if (k == 0) return 1.0;
    if (k < 2 || k % 2 != 0) return 0.0;
    const int j = k / 2;
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    return sign * std::pow(p.kappa, j) * std::pow(zb, 2 * j);
  }
  if (k < 1 || k % 2 != 1) return 0.0;
  const int j = (k - 1) / 2;
  return p.kappa * zb * std::pow(-p.kappa * zb * zb, j);
}

cplx oracle_mode_dzbar(const CCParams& p, int comp, int k, cplx z) {
  const cplx zb = std::conj(z);
  const double zz = std::norm(z);
  if (comp == 0) {
    if (k == 0) return 0.0;
    if (k < 2 || k % 2 != 0) return 0.0;
    const int j = k / 2;
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    const double kj = std::pow(p.kappa, j - 1);
    return sign * kj *
           ((2.0 * j - 1.0) * std::pow(zb, 2 * j - 2) * (1.0 + p.kappa * zz) +
            std::pow(zb, 2 * j - 1) * p.kappa * z);
  }
  if (k < 1 || k % 2 != 1) return 0.0;
  const int j = (k - 1) / 2;
  const cplx base = std::pow(-p.kappa * zb * zb, j);
  cplx out = p.kappa * z * base;
  if (j >= 1)
    out += (1.0 + p.kappa * zz) * (double)j * std::pow(-p.kappa, j) * 2.0 *
           std::pow(zb, 2 * j - 1);
  return out;
}

TwistorMap oracle_twistor_map(const CCParams& p, const PolarGrid& g, int k_max) {
  check_params(p);
  TwistorMap map;
  map.metric = constant_curvature_metric(p.kappa, p.R);
  map.grid = g;
  map.k_max = k_max;
  map.kappa = p.kappa;
  map.provenance = (p.kappa == 0.0) ? MapProvenance::euclidean : MapProvenance::oracle_cc;
  map.comp0.resize(k_max + 1);
  map.comp1.resize(k_max + 1);
  for (int k = 0; k <= k_max; ++k) {
    const int comp = k % 2;
    std::vector<cplx> vals((size_t)g.size());
    bool nonzero = false;
    for (int i = 0; i < g.n_r; ++i)
      for (int j = 0; j < g.n_theta; ++j) {
        const cplx v = oracle_mode(p, comp, k, g.node(i, j));
        vals[g.index(i, j)] = v;
        nonzero |= (v != cplx(0.0));
      }
    if (!nonzero) continue;
    if (comp == 0)
      map.comp0[k] = std::move(vals);
    else
      map.comp1[k] = std::move(vals);
  }
  const double ratio = std::abs(p.kappa) * p.R * p.R;
  map.truncation_bound = ratio > 0.0 ? std::pow(ratio, k_max / 2) / (1.0 - ratio) : 0.0;
  CCParams pc = p;
  map.analytic.u = [pc](int comp, int k, cplx z) { return oracle_mode(pc, comp, k, z); };
  map.analytic.du_dz = [pc](int comp, int k, cplx z) { return oracle_mode_dz(pc, comp, k, z); };
  map.analytic.du_dzbar = [pc](int comp, int k, cplx z) {
    return oracle_mode_dzbar(pc, comp, k, z);
  };
  return map;
}

}  // namespace twistor
