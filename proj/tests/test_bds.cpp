#include <doctest.h>

#include <cmath>

#include "twistor/bds.hpp"
#include "twistor/errors.hpp"
#include "twistor/oracles.hpp"

using namespace twistor;

namespace {

TwistorMap stripped(const TwistorMap& map) {
  TwistorMap copy = map;
  copy.analytic = AnalyticModes{};
  return copy;
}

}  // namespace

TEST_CASE("frame jacobian in the flat disk") {
  const CCParams p{0.0, 1.0};
  const auto m = constant_curvature_metric(0.0, 1.0);
  const auto map = oracle_twistor_map(p, PolarGrid(1.0, 8, 32), 8);

  const cplx z(0.5, 0.0), mu(0.0, 0.3);
  const auto J = jacobian_S(m, map, z, mu);
  CHECK(std::abs(J.S[0][0] - 1.0) < 1e-12);
  CHECK(std::abs(J.S[0][1]) < 1e-12);
  CHECK(std::abs(J.S[1][0] + 2.0 * mu * std::conj(z)) < 1e-12);
  CHECK(std::abs(J.S[1][1] - 1.0) < 1e-12);
  CHECK(std::abs(J.det() - 1.0) < 1e-12);

  CHECK_THROWS_AS(jacobian_S(m, map, cplx(1.0, 0.0), mu), DomainError);
}

TEST_CASE("pullback against the closed form") {
  const CCParams p{0.3, 1.0};
  const auto m = constant_curvature_metric(0.3, 1.0);
  const auto map = oracle_twistor_map(p, PolarGrid(1.0, 32, 128), 32);

  for (double rf : {0.2, 0.55, 0.85})
    for (double mm : {0.0, 0.4, 0.9, 1.0})
      for (int ip = 0; ip < 5; ++ip) {
        const cplx z = std::polar(rf, 0.3 + 1.1 * ip);
        const cplx mu = std::polar(mm, 0.5 + 0.9 * ip);
        const auto H = hermitian_pullback(m, map, z, mu);
        const double tr = H.h[0][0].real() + H.h[1][1].real();
        const double det =
            (H.h[0][0] * H.h[1][1] - H.h[0][1] * H.h[1][0]).real();

        const double zz = std::norm(z);
        const cplx den = 1.0 + p.kappa * std::conj(z) * std::conj(z) * mu * mu;
        const double want = std::pow(1.0 + p.kappa * zz, 4) / std::pow(std::abs(den), 4);
        CHECK(std::abs(det - want) < 1e-8 * want);

        // interlacing bound used by the lambda certificate
        CHECK(H.lambda_min >= det / tr - 1e-12);
        CHECK(H.lambda_min >= lambda_min_bound(p));
        CHECK(H.lambda_min <= H.lambda_max);
      }
}

TEST_CASE("wedge coefficient matches the determinant") {
  const CCParams p{0.3, 1.0};
  const auto m = constant_curvature_metric(0.3, 1.0);
  const auto map = oracle_twistor_map(p, PolarGrid(1.0, 32, 128), 32);

  for (double rf : {0.15, 0.6, 0.88})
    for (double mm : {0.0, 0.5, 0.9})
      for (int ip = 0; ip < 4; ++ip) {
        const cplx z = std::polar(rf, 1.3 * ip + 0.2);
        const cplx mu = std::polar(mm, 0.8 * ip);
        const cplx w = wedge_coefficient(m, map, z, mu);
        const cplx d = jacobian_S(m, map, z, mu).det();
        CHECK(std::abs(w - d) < 1e-8);
      }
  CHECK_THROWS_AS(wedge_coefficient(m, map, cplx(0.2, 0.0), cplx(1.0, 0.0)), DomainError);
}

TEST_CASE("determinant scan against scan-free minima") {
  GridSpec spec;
  for (double kappa : {0.3, -0.4}) {
    const CCParams p{kappa, 1.0};
    const auto m = constant_curvature_metric(kappa, 1.0);
    const auto map = oracle_twistor_map(p, polar_grid(m, spec), 48);
    const auto scan = det_scan(m, map, spec);

    const double want = det_scan_min_cc(p);
    INFO("kappa = " << kappa << ", scan min = " << scan.min_abs_det << ", closed form = "
                    << want);
    CHECK(scan.min_abs_det >= want * (1.0 - 1e-9));
    CHECK(scan.min_abs_det <= want * 1.01);
    CHECK(scan.min_lambda > lambda_min_bound(p));
    CHECK(scan.max_op_norm > 1.0);
  }

  // flat determinant is identically one
  const auto m0 = constant_curvature_metric(0.0, 1.0);
  const auto map0 = oracle_twistor_map({0.0, 1.0}, polar_grid(m0, spec), 8);
  const auto scan0 = det_scan(m0, map0, spec);
  CHECK(std::abs(scan0.min_abs_det - 1.0) < 1e-10);
}

TEST_CASE("boundary restriction is totally real") {
  GridSpec spec;
  for (double kappa : {0.0, 0.3, -0.4}) {
    const CCParams p{kappa, 1.0};
    const auto m = constant_curvature_metric(kappa, 1.0);
    const auto map = oracle_twistor_map(p, polar_grid(m, spec), 48);
    const auto scan = totally_real_check(m, map, 64, 33);

    const double want = totally_real_min_cc(p);
    INFO("kappa = " << kappa << ", scan = " << scan.min_det << ", closed form = " << want);
    CHECK(scan.min_det > 0.0);
    CHECK(std::abs(scan.min_det - want) <= 0.01 * want);
    CHECK(scan.min_pair_ratio > 0.0);
  }
}

TEST_CASE("fold chart agrees away from the equator") {
  const auto m = constant_curvature_metric(0.0, 1.0);
  const auto map = oracle_twistor_map({0.0, 1.0}, PolarGrid(1.0, 16, 64), 8);
  const double win = totally_real_window_min(m, map, 48, 33, 0.3, 1.45);
  const double fold = fold_chart_min(m, map, 48, 33, 0.3, 1.45);
  CHECK(win > 0.0);
  CHECK(std::abs(fold - win) <= 0.05 * win);
  CHECK_THROWS_AS(fold_chart_min(m, map, 48, 33, 0.0, 1.45), DomainError);
}

TEST_CASE("fiber antiholomorphic residual") {
  const CCParams p{0.3, 1.0};
  const auto m = constant_curvature_metric(0.3, 1.0);
  GridSpec spec;
  const auto map = oracle_twistor_map(p, polar_grid(m, spec), spec.k_max);

  CHECK(holomorphy_residual(m, map, spec) < 1e-8);
  CHECK(holomorphy_residual(m, stripped(map), spec) < 1e-6);
}

TEST_CASE("path-ratio injectivity certificate") {
  const CCParams p{0.3, 1.0};
  const auto m = constant_curvature_metric(0.3, 1.0);
  GridSpec spec;
  const auto map = oracle_twistor_map(p, polar_grid(m, spec), spec.k_max);

  const auto inj = injectivity_scan(m, map, 64, 20260822ull);
  const auto scan = det_scan(m, map, spec);
  CHECK(inj.min_ratio > 0.3);
  CHECK(inj.max_ratio >= inj.min_ratio);
  CHECK(inj.max_ratio < 1.1 * scan.max_op_norm);

  // same pairs, same seed: the scan is reproducible
  const auto again = injectivity_scan(m, map, 64, 20260822ull);
  CHECK(again.min_ratio == inj.min_ratio);
  CHECK(again.max_ratio == inj.max_ratio);
}

TEST_CASE("a degenerate map is caught") {
  const CCParams p{0.3, 1.0};
  const auto m = constant_curvature_metric(0.3, 1.0);
  GridSpec spec;
  spec.n_r = 16;
  spec.n_theta = 64;
  spec.k_max = 16;
  auto map = stripped(oracle_twistor_map(p, polar_grid(m, spec), spec.k_max));
  for (auto& mode : map.comp1) mode.assign(mode.size(), cplx(0.0));
  const auto scan = det_scan(m, map, spec);
  CHECK(scan.min_abs_det < 1e-12);
}

TEST_CASE("default thresholds pin the reference constants") {
  const auto m = constant_curvature_metric(0.3, 1.0);
  GridSpec spec;
  const auto th = default_thresholds(m, spec, 64, 20260822ull);

  CHECK(th.min_abs_det_S == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(th.min_lambda_min == doctest::Approx(0.5 * 0.49 / 14.0).epsilon(1e-9));
  const double embed = 16.0 * 1.69 / std::pow(1.3, 4);
  CHECK(th.min_tr_embed_det == doctest::Approx(0.5 * embed).epsilon(1e-9));
  CHECK(th.min_injectivity_ratio > 0.0);
  CHECK(th.min_injectivity_ratio < 1.0);
  CHECK(th.holomorphy == 5e-3);
}

TEST_CASE("full certificate on a reference map") {
  const CCParams p{0.3, 1.0};
  const auto m = constant_curvature_metric(0.3, 1.0);
  GridSpec spec;
  const auto map = oracle_twistor_map(p, polar_grid(m, spec), spec.k_max);

  const auto rep = certify_bds(m, map, spec);
  CHECK(rep.det_ok);
  CHECK(rep.lambda_ok);
  CHECK(rep.injectivity_ok);
  CHECK(rep.embed_ok);
  CHECK(rep.holomorphy_ok);
  CHECK(rep.pass);
  CHECK(rep.min_abs_det_S >= rep.thresholds.min_abs_det_S);
  CHECK(rep.min_lambda_min >= rep.thresholds.min_lambda_min);
  CHECK(rep.holomorphy_residual < rep.thresholds.holomorphy);
  CHECK(rep.interior_margin == 0.02);

  // failing thresholds flip the verdict without touching the scans
  BdsThresholds hard = rep.thresholds;
  hard.min_abs_det_S = rep.min_abs_det_S * 1.5;
  const auto rep2 = certify_bds(m, map, spec, &hard);
  CHECK(!rep2.det_ok);
  CHECK(!rep2.pass);
}
