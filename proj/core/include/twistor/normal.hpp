#pragma once

#include <Eigen/Dense>

#include "twistor/xray.hpp"

namespace twistor {

// N_k a on the polar grid: sample the invariant extension of I_k a over the
// fiber circle, extract mode k, scale by 2 pi. The constant is pinned by
// the Euclidean ground truth N_0 1 (0) = 4 pi (the full-fiber average of
// chord lengths through the center) and reused verbatim for every k.
// n_theta_fiber = 0 uses the field grid's angular count.
ModeField normal_Nk(const ConformalMetric& m, int k, const ModeField& a,
                    int n_theta_fiber = 0, int n_quad = 48);

// Matrix of normal_Nk on the rho_half nodal basis: column = hat function at
// one polar node, rows = smooth output values at the nodes. Grid counts are
// taken from `grid` without validation so degenerate layouts (single ring)
// remain expressible for structure checks.
Eigen::MatrixXcd assemble_normal_matrix(const ConformalMetric& m, int k, const GridSpec& grid);

// Tikhonov-regularized solve of (normal matrix) b = rhs with the discrete
// polar gradient as penalty; returns the rho_half field b. reg < 0 selects
// 1e-8 * ||matrix||_inf, and if the relative roundtrip residual exceeds
// 1e-3 a small regularization ladder is scanned for the best fit before
// giving up (NumericalError beyond 5e-2).
ModeField solve_normal(const ConformalMetric& m, int k, const ModeField& rhs, double reg = -1.0);

// the same solve against a prebuilt matrix (rhs given as nodal values)
std::vector<cplx> solve_normal_with_matrix(const Eigen::MatrixXcd& M, const PolarGrid& g,
                                           const std::vector<cplx>& rhs, double reg,
                                           double* residual_out);

// Regularized least squares (M^H M + reg * penalty) x = M^H rhs with the
// residual ladder shared by the full-grid and radial-block solvers.
Eigen::VectorXcd tikhonov_solve(const Eigen::MatrixXcd& M, const Eigen::MatrixXd& penalty,
                                const Eigen::VectorXcd& rhs, double reg, double* residual_out);

// || I_k a ||-minimality gap: builds the canonical boundary trace whose
// extension has fiber mode k equal to f, and returns
// symplectic_norm(u_alt) - symplectic_norm(canonical). Nonnegative for any
// u_alt = canonical + perturbation with vanishing backprojection.
double minimality_gap(const ConformalMetric& m, int k, const ModeField& f,
                      const BoundaryField& u_alt, double reg = -1.0);

// smallest singular value (dense, for conditioning records)
double smallest_singular_value(const Eigen::MatrixXcd& M);

// Chord tables from the base column phi = 0 of a rotationally symmetric
// metric. Every chord through (r e^{i phi}, theta) is the rotation by phi
// of a tabulated one, which collapses normal-operator assembly to radial
// blocks per angular mode and invariant extension to table lookups.
class SymmetricNormalTable {
 public:
  SymmetricNormalTable(const ConformalMetric& m, const PolarGrid& g, int n_quad);

  const PolarGrid& grid() const { return g_; }
  int n_quad() const { return nq_; }

  // influx boundary point of the chord through (r_i, theta_l) at phi = 0
  const BoundaryPoint& entry(int i, int l) const { return entries_[(size_t)i * nth_ + l]; }

  // radial matrix of N_k acting on b(r) e^{i m phi} rho^{-1/2}
  Eigen::MatrixXcd block(int k, int m_ang) const;

  // I_k along the tabulated chord of (r_i, theta_l) for such a field
  cplx apply_chord(int k, int m_ang, const std::vector<cplx>& radial, int i, int l) const;

 private:
  struct Sample {
    double w = 0.0;      // quadrature weight including tau sqrt(u(1-u)/rho)
    double theta = 0.0;  // direction angle at the sample
    double phi = 0.0;    // position angle of the sample point
    int idx[4];
    double wt[4];
    bool refl[4];
  };
  ConformalMetric m_;
  PolarGrid g_;
  int nth_ = 0, nq_ = 0;
  std::vector<BoundaryPoint> entries_;
  std::vector<Sample> samples_;  // [(i * nth + l) * nq + q]
};

}  // namespace twistor
