#pragma once

#include <cmath>
#include <vector>

#include "twistor/metric.hpp"

namespace twistor {

// Discretization parameters shared across the pipeline.
//   n_r        radial node count of the polar field grid
//   n_theta    angular node count (power of two; also the fiber grid)
//   k_max      fibrewise mode truncation
//   quad_nodes node count of the endpoint-singular chord quadrature
struct GridSpec {
  int n_r = 32;
  int n_theta = 128;
  int k_max = 32;
  int quad_nodes = 48;

  void validate() const;
};

// Polar field grid on the disk of radius R: cell-centered radii
// r_i = R (2i+1) / (2 n_r) (no node at the center or on the rim) and
// uniform angles phi_j = 2 pi j / n_theta. Node index = i * n_theta + j.
struct PolarGrid {
  double R = 1.0;
  int n_r = 0;
  int n_theta = 0;

  PolarGrid() = default;
  PolarGrid(double R_, int n_r_, int n_theta_) : R(R_), n_r(n_r_), n_theta(n_theta_) {}

  int size() const { return n_r * n_theta; }
  double radius(int i) const { return R * (2.0 * i + 1.0) / (2.0 * n_r); }
  double angle(int j) const { return 2.0 * M_PI * j / n_theta; }
  cplx node(int i, int j) const {
    const double r = radius(i), p = angle(j);
    return cplx(r * std::cos(p), r * std::sin(p));
  }
  int index(int i, int j) const { return i * n_theta + j; }
};

PolarGrid polar_grid(const ConformalMetric& m, const GridSpec& g);

// Boundary grid over the influx annulus (omega, alpha): omega uniform on
// [0, 2pi), alpha rows clustered toward the glancing set via
// alpha(s) = alpha_max sin(pi s / 2), s uniform on [-1, 1], with
// alpha_max = pi/2 - eps_g. The extreme rows sit exactly at +-alpha_max and
// store the finite glancing limits.
struct BoundaryGrid {
  static constexpr double eps_glancing = 1e-4;

  int n_omega = 0;
  int n_alpha = 0;  // odd, so alpha = 0 is a row

  int size() const { return n_omega * n_alpha; }
  double omega(int j) const { return 2.0 * M_PI * j / n_omega; }
  double s_node(int a) const { return -1.0 + 2.0 * a / (n_alpha - 1); }
  double alpha_max() const { return 0.5 * M_PI - eps_glancing; }
  double alpha(int a) const { return alpha_max() * std::sin(0.5 * M_PI * s_node(a)); }
  // inverse of the clustering map, clamped to the covered range
  double s_of_alpha(double al) const;
  int index(int a, int j) const { return a * n_omega + j; }
};

BoundaryGrid boundary_grid(const GridSpec& g);

}  // namespace twistor
