#include "twistor/grid.hpp"

#include <algorithm>
#include <cmath>

#include "twistor/errors.hpp"

namespace twistor {

void GridSpec::validate() const {
  require(n_r >= 4, "GridSpec: n_r >= 4");
  require(n_theta >= 8 && n_theta % 2 == 0, "GridSpec: n_theta >= 8 and even");
  require(k_max >= 2, "GridSpec: k_max >= 2");
  require(k_max <= n_theta / 2 - 1, "GridSpec: k_max <= n_theta/2 - 1");
  require(quad_nodes >= 8, "GridSpec: quad_nodes >= 8");
}

PolarGrid polar_grid(const ConformalMetric& m, const GridSpec& g) {
  g.validate();
  return PolarGrid(m.R, g.n_r, g.n_theta);
}

double BoundaryGrid::s_of_alpha(double al) const {
  const double x = std::clamp(al / alpha_max(), -1.0, 1.0);
  return std::asin(x) / (0.5 * M_PI);
}

BoundaryGrid boundary_grid(const GridSpec& g) {
  g.validate();
  BoundaryGrid b;
  b.n_omega = g.n_theta;
  b.n_alpha = std::max(17, g.n_theta / 2 + 1);
  if (b.n_alpha % 2 == 0) ++b.n_alpha;
  return b;
}

}  // namespace twistor
