#include <doctest.h>

#include <cmath>

#include "twistor/errors.hpp"
#include "twistor/grid.hpp"
#include "twistor/metric.hpp"

using namespace twistor;

TEST_CASE("conformal factor of the curvature family") {
  const auto flat = constant_curvature_metric(0.0, 1.0);
  CHECK(flat.sigma(cplx(0.5, 0.0)) == 0.0);
  CHECK(std::abs(flat.dz_sigma(cplx(0.2, 0.4))) == 0.0);

  const auto m = constant_curvature_metric(0.5, 1.0);
  CHECK(m.sigma(cplx(1.0, 0.0)) == doctest::Approx(-std::log(1.5)).epsilon(1e-14));
  CHECK(m.sigma(cplx(1.0, 0.0)) == doctest::Approx(-0.405465).epsilon(1e-5));
  const cplx z(0.3, -0.4);
  const cplx expect = -0.5 * std::conj(z) / (1.0 + 0.5 * std::norm(z));
  CHECK(std::abs(m.dz_sigma(z) - expect) < 1e-14);

  CHECK_THROWS_AS(constant_curvature_metric(-2.0, 1.0), DomainError);
  CHECK_THROWS_AS(constant_curvature_metric(0.5, 1.5), DomainError);
}

TEST_CASE("gauss curvature") {
  const auto m = constant_curvature_metric(0.3, 1.0);
  CHECK(gauss_curvature(m, cplx(0.2, 0.1)) == doctest::Approx(1.2).epsilon(1e-10));
  CHECK(gauss_curvature(m, cplx(-0.7, 0.55)) == doctest::Approx(1.2).epsilon(1e-10));

  const auto flat = euclidean_metric(1.0);
  CHECK(gauss_curvature(flat, cplx(0.4, -0.3)) == doctest::Approx(0.0).epsilon(1e-12));

  // sigma = |z|^2 has d_z d_zbar sigma = 1, so K(0) = -4
  const auto bowl = custom_metric([](cplx z) { return std::norm(z); },
                                  [](cplx z) { return std::conj(z); }, 1.0, true);
  CHECK(gauss_curvature(bowl, cplx(0.0)) == doctest::Approx(-4.0).epsilon(1e-7));

  CHECK_THROWS_AS(gauss_curvature(m, cplx(1.5, 0.0)), DomainError);
}

TEST_CASE("derivative consistency along the real axis") {
  const auto m = constant_curvature_metric(0.5, 1.0);
  const auto bump = custom_metric(
      [](cplx z) { return 0.2 * std::exp(-4.0 * std::norm(z - cplx(0.3, 0.0))); },
      [](cplx z) {
        return 0.2 * std::exp(-4.0 * std::norm(z - cplx(0.3, 0.0))) *
               (-4.0 * (std::conj(z) - 0.3));
      },
      1.0, false);
  for (const ConformalMetric* mm : {&m, &bump})
    for (double x : {-0.6, 0.1, 0.55}) {
      for (double h : {1e-3, 1e-4}) {
        const double fd = (mm->sigma(cplx(x + h, 0.0)) - mm->sigma(cplx(x - h, 0.0))) / (2 * h);
        const double an = 2.0 * mm->dz_sigma(cplx(x, 0.0)).real();
        CHECK(std::abs(fd - an) < 10.0 * h * h);
      }
    }
}

TEST_CASE("simplicity screening") {
  const GridSpec g;
  CHECK(check_simple(constant_curvature_metric(0.3, 1.0), g).simple());
  CHECK(check_simple(euclidean_metric(1.0), g).simple());
  CHECK(check_simple(constant_curvature_metric(0.99, 1.0), g).simple());
  CHECK(check_simple(constant_curvature_metric(-0.8, 1.0), g).simple());
}

TEST_CASE("grid parameter validation") {
  GridSpec g;
  CHECK_NOTHROW(g.validate());

  GridSpec bad = g;
  bad.n_r = 3;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = g;
  bad.n_theta = 15;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = g;
  bad.k_max = 1;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = g;
  bad.k_max = bad.n_theta / 2;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = g;
  bad.quad_nodes = 7;
  CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("polar and boundary grids") {
  const auto m = euclidean_metric(2.0);
  GridSpec spec;
  spec.n_r = 8;
  spec.n_theta = 16;
  spec.k_max = 7;
  const PolarGrid g = polar_grid(m, spec);
  CHECK(g.size() == 128);
  CHECK(g.radius(0) == doctest::Approx(2.0 / 16.0));
  CHECK(g.radius(7) == doctest::Approx(2.0 * 15.0 / 16.0));
  CHECK(std::abs(g.node(2, 4) - cplx(0.0, g.radius(2))) < 1e-14);

  const BoundaryGrid bg = boundary_grid(spec);
  CHECK(bg.n_omega == 16);
  CHECK(bg.n_alpha % 2 == 1);
  CHECK(bg.alpha(bg.n_alpha - 1) == doctest::Approx(0.5 * M_PI - 1e-4).epsilon(1e-12));
  CHECK(bg.alpha((bg.n_alpha - 1) / 2) == doctest::Approx(0.0));
  // clustering map runs both ways
  for (int a = 1; a < bg.n_alpha - 1; ++a)
    CHECK(bg.s_of_alpha(bg.alpha(a)) == doctest::Approx(bg.s_node(a)).epsilon(1e-10));
}
