#pragma once

#include <functional>
#include <vector>

#include "twistor/flow.hpp"

namespace twistor {

// Jacobi field J'' + K(gamma(t)) J = 0 with J(0) = 0, J'(0) = 1, integrated
// along a recorded chord (K evaluated via the dense output). `positive` is
// false if J vanishes strictly inside (0, exit_time], i.e. a conjugate point.
struct JacobiSolution {
  double J_exit = 0.0;
  double dJ_exit = 0.0;
  bool positive = true;
  double first_zero = -1.0;  // time of the first interior zero, if any
};

JacobiSolution jacobi_along(const ConformalMetric& m, const GeodesicRecord& rec);

// Rescaled Jacobi profile on [0,1] x S^1: solves, for each theta,
//   f'' (s) + eps^2 K(eps s, theta) f(s) = 0,  f(0) = 0, f'(0) = 1,
// the blow-up normalization under which profiles collapse onto f0(s) = s as
// eps -> 0 at second order.
struct JacobiProfile {
  int n_s = 0, n_theta = 0;
  double eps = 0.0;
  std::vector<double> f;  // [theta][s] row-major, s uniform on [0,1]
  double defect = 0.0;    // sup |f - s|
};

JacobiProfile jacobi_profile(const std::function<double(double, double)>& K, double eps,
                             int n_s = 256, int n_theta = 16);

}  // namespace twistor
