#pragma once

#include <array>
#include <vector>

#include "twistor/grid.hpp"

namespace twistor {

// ---- low-level cubic interpolation -----------------------------------------

// 4-point Lagrange weights on a uniform stencil {x1-h, x1, x1+h, x1+2h} for
// evaluation at x1 + t*h. Exact for cubics; t may leave [0,1] for one-sided
// use near grid edges.
std::array<double, 4> cubic_weights(double t);

// Radial stencil on the cell-centered polar grid. Radii below the innermost
// node are handled by reflection through the center: a ghost at -r_i takes
// the value of node r_i at angle phi + pi (flagged via `reflected`). Radii
// beyond the outermost node use a one-sided stencil (extrapolation toward
// the rim; fields of interest are smooth up to |z| = R).
struct RadialStencil {
  int idx[4];
  double w[4];
  bool reflected[4];
};
RadialStencil radial_stencil(const PolarGrid& g, double r);

// Full 4x4 tensor stencil for a point z, reflection folded in. Weights sum
// to 1; idx are node indices into a field vector of size g.size().
struct PolarStencil {
  int idx[16];
  double w[16];
};
PolarStencil polar_stencil(const PolarGrid& g, cplx z);

// weighted sum of nodal values over a stencil
cplx gather(const PolarStencil& st, const std::vector<cplx>& values);

// ---- fields ----------------------------------------------------------------

enum class FieldWeight { smooth, rho_half };

// Fibrewise Fourier coefficient fields u_k(z) on the polar grid. A field
// tagged rho_half stores only the smooth factor b of a = b * rho^{-1/2};
// evaluation multiplies the singular weight back in.
struct ModeField {
  PolarGrid grid;
  std::vector<int> k_values;
  std::vector<std::vector<cplx>> coeffs;  // [mode][node]
  FieldWeight weight = FieldWeight::smooth;

  int find_mode(int k) const;
  bool single_mode() const { return k_values.size() == 1; }
  int the_mode() const;
};

ModeField single_mode_field(const PolarGrid& g, int k, const std::vector<cplx>& values,
                            FieldWeight w);
ModeField sample_single_mode(const PolarGrid& g, int k,
                             const std::function<cplx(cplx)>& fn, FieldWeight w);

// Interpolated smooth part of one stored mode at z.
cplx eval_mode(const ModeField& f, int which, cplx z);

// u(z, theta) = sum_k u_k(z) e^{i k theta}, including the rho^{-1/2} factor
// for rho_half fields (requires |z| < R in that case).
cplx eval_field(const ModeField& f, const ConformalMetric& m, cplx z, double theta);

// ---- derivative fields -----------------------------------------------------

// Fornberg finite-difference weights for the m-th derivative at x0 over
// arbitrary nodes xs (exact through degree xs.size() - 1).
std::vector<double> fd_weights(double x0, const std::vector<double>& xs, int m);

// d/dz and d/dzbar of a smooth nodal field, returned as nodal fields on the
// same grid. Angular derivatives are spectral (per-ring FFT plus the mode
// shift rule for e^{i m phi} components); radial derivatives use 6th-order
// differences on the cell-centered rings, with parity ghosts through r = 0
// and one-sided closure at the rim.
struct DerivPair {
  std::vector<cplx> dz, dzbar;
};
DerivPair derivative_fields(const PolarGrid& g, const std::vector<cplx>& values);

// Samples over the influx boundary grid, row-major in (alpha, omega).
// Extreme alpha rows hold the glancing limits at |alpha| = pi/2 - eps_g.
struct BoundaryField {
  BoundaryGrid grid;
  std::vector<cplx> samples;

  cplx& at(int a, int j) { return samples[grid.index(a, j)]; }
  const cplx& at(int a, int j) const { return samples[grid.index(a, j)]; }
};

BoundaryField make_boundary_field(const BoundaryGrid& g);

// Bicubic evaluation in (omega, s(alpha)); omega periodic, s clamped to the
// covered range (the clamp only engages within eps_g of true glancing).
cplx eval_boundary(const BoundaryField& f, double omega, double alpha);

}  // namespace twistor
