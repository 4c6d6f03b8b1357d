#pragma once

#include "twistor/fft.hpp"
#include "twistor/fields.hpp"
#include "twistor/flow.hpp"

namespace twistor {

// Geodesic X-ray transform of a single-mode field along the chord of b:
//   smooth weight:    int_0^tau  a(z(t)) e^{i k theta(t)} dt
//   rho_half weight:  int_0^tau  b(z(t)) rho(z)^{-1/2} e^{i k theta(t)} dt,
// the latter via the substitution t = u tau and Gauss-Chebyshev nodes in u
// that absorb the endpoint square-root singularity (rho along a chord
// vanishes linearly at both ends). Glancing input: 0 for smooth weight,
// rejected for rho_half (the finite limit is taken at the clustered
// boundary-grid rows instead).
cplx xray_Ik(const ConformalMetric& m, const ModeField& a, const BoundaryPoint& b,
             int n_quad = 48);

// same, reusing an already-integrated chord
cplx xray_Ik_on_chord(const ConformalMetric& m, const ModeField& a, const GeodesicRecord& rec,
                      int n_quad = 48);

// I_k sampled over a whole influx boundary grid (parallel over rows)
BoundaryField xray_boundary(const ConformalMetric& m, const ModeField& a,
                            const BoundaryGrid& bg, int n_quad = 48);

// fibrewise Fourier coefficients of uniform fiber samples, k = -k_max..k_max
inline std::vector<cplx> fiber_modes(const std::vector<cplx>& samples, int k_max) {
  return fourier_modes(samples, k_max);
}

// invariant extension: h at the influx point of the chord through p
cplx sharp_extend(const ConformalMetric& m, const BoundaryField& h, const PhasePoint& p);

// ||h||^2 = int |h|^2 cos(alpha) R e^{sigma(R e^{i omega})} d omega d alpha,
// Simpson in the clustered alpha parameter, rectangle rule in omega;
// returns the norm itself (not its square)
double symplectic_norm(const ConformalMetric& m, const BoundaryField& h);

}  // namespace twistor
