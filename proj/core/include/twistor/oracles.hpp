#pragma once

#include <utility>

#include "twistor/beta.hpp"
#include "twistor/flow.hpp"

namespace twistor {

// Constant-curvature family on the disk of radius R: conformal factor
// e^{2 sigma} = (1 + kappa |z|^2)^{-2}, Gauss curvature 4 kappa, simple
// exactly when |kappa| R^2 < 1.
struct CCParams {
  double kappa = 0.0;
  double R = 1.0;
};

// forward map (w, xi) = ((z - mu^2 zbar)/(1 + kappa zbar^2 mu^2),
//                        mu (1 + kappa z zbar)/(1 + kappa zbar^2 mu^2))
std::pair<cplx, cplx> beta_cc(const CCParams& p, cplx z, cplx mu);

// m(y) = (1/2 + sqrt(y + 1/4))^{-1}, the root selector of the inverse;
// satisfies y = x/(1-x)^2 for x = 1 - m(y), with values in (0, 2).
double m_func(double y);

// image characterization: |kappa w^2 + xi^2| < 1 and the recovered center
// estimate below R/(1 - kappa R^2)
bool image_membership(double kappa, double R, cplx w, cplx xi);

// exact inverse on the image (throws DomainError off it)
std::pair<cplx, cplx> beta_cc_inverse(const CCParams& p, cplx w, cplx xi);

// (1 - |kappa| R^2)^2 / (10 + 4 R^2), the uniform lower bound certified for
// the smallest eigenvalue of S S*
double lambda_min_bound(const CCParams& p);

// s(alpha) = atan(((1 - kappa R^2)/(1 + kappa R^2)) tan alpha)
double scattering_cc(const CCParams& p, double alpha);

// boundary image (w, xi) at the influx point (omega, alpha)
std::pair<cplx, cplx> vertex_cc(const CCParams& p, double omega, double alpha);

// closed-form scan minima for the certificates
double det_scan_min_cc(const CCParams& p);      // min |det S| over Z
double totally_real_min_cc(const CCParams& p);  // min of det/cos^2(alpha) on the rim

// Euclidean normal-operator kernel 2/|x - y| on the disk
double normal_kernel_euclidean(cplx x, cplx y);

// N_0 applied to the constant 1 in the Euclidean disk of radius R at radius
// r: the circle average of full chord lengths, by periodic quadrature
double normal_one_euclidean(double R, double r);

// kernel-route normal operator: int 2 f(y)/|x-y| dy over the disk, computed
// in polar coordinates centered at x (the substitution removes the kernel
// singularity)
double kernel_route_normal0(const std::function<double(cplx)>& f, double R, cplx x,
                            int n_phi = 96, int n_s = 32);

// sup_s |f_eps(s) - s| for constant curvature 4 kappa, closed form
// sin(2 sqrt(kappa) eps s)/(2 sqrt(kappa) eps) (sinh for kappa < 0)
double jacobi_defect_cc(double kappa, double eps);

// closed-form mode coefficients of beta_cc's geometric-series expansion:
//   comp 0: u_0 = z, u_{2j} = (-1)^j kappa^{j-1} zbar^{2j-1} (1 + kappa z zbar)
//   comp 1: u_{2j+1} = (1 + kappa z zbar) (-kappa zbar^2)^j
cplx oracle_mode(const CCParams& p, int comp, int k, cplx z);
cplx oracle_mode_dz(const CCParams& p, int comp, int k, cplx z);
cplx oracle_mode_dzbar(const CCParams& p, int comp, int k, cplx z);

// materialized oracle map: grid samples of the closed-form modes plus the
// analytic accessors
TwistorMap oracle_twistor_map(const CCParams& p, const PolarGrid& g, int k_max);

}  // namespace twistor
