#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "plk/geometry.hpp"

using namespace plk;

TEST_CASE("stationarity measures on singleton subdifferentials") {
  const Problem p = make_dc_quadratic(2.0, 1.0, 1);
  const auto s1 = sigma1(p, Point{1.0});
  CHECK(s1.value == doctest::Approx(1.0));  // |2 - 1|
  CHECK(s1.v1[0] == doctest::Approx(1.0));
  CHECK(sigma0(p, Point{1.0}) == doctest::Approx(1.0));  // singleton: equal measures
  CHECK_THROWS_AS(sigma1(make_piecewise_plus(), Point{1.0}), std::runtime_error);
}

TEST_CASE("stationarity measures at the kink: interval subdifferential") {
  const Problem p = make_dc_abs(1.0, 1.0);
  // grad g(0) = 0, subdifferential of h at 0 is [-1, 1]
  const auto s1 = sigma1(p, Point{0.0});
  CHECK(s1.value == doctest::Approx(1.0));
  CHECK(s1.v1[0] == doctest::Approx(-1.0));  // tie broken to the smaller vertex
  CHECK(sigma0(p, Point{0.0}) == doctest::Approx(0.0));
  // off the kink both measures coincide
  CHECK(sigma0(p, Point{1.0}) == doctest::Approx(sigma1(p, Point{1.0}).value));
}

TEST_CASE("sigma0 <= sigma1 everywhere sampled") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> ux(-3.0, 3.0);
  for (const Problem& p : {make_dc_abs(1.0, 1.0), make_dc_abs(2.0, 0.5),
                           make_dc_quadratic(3.0, 1.0, 1)}) {
    for (int i = 0; i < 200; ++i) {
      const Point x{ux(rng)};
      CHECK(sigma0(p, x) <= sigma1(p, x).value + 1e-12);
    }
  }
}

TEST_CASE("attaining vertex solves the linearized minimization") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> ux(-2.0, 2.0);
  for (const Problem& p : {make_dc_abs(1.0, 1.0), make_dc_quadratic(2.0, 1.0, 1)}) {
    for (int i = 0; i < 100; ++i) CHECK(vertex_optimality_gap(p, Point{ux(rng)}) <= 1e-10);
    CHECK(vertex_optimality_gap(p, Point{0.0}) <= 1e-10);
  }
}

TEST_CASE("level Lipschitz estimate: exact for linear gradients") {
  CHECK(estimate_level_lipschitz(make_quadratic(1.0, 1), Point{1.0}).L_hat ==
        doctest::Approx(1.0).epsilon(1e-9));
  CHECK(estimate_level_lipschitz(make_dc_quadratic(2.0, 1.0, 1), Point{1.0}).L_hat ==
        doctest::Approx(2.0).epsilon(1e-9));
  // n-D sampling path
  const auto nd = estimate_level_lipschitz(make_quadratic(3.0, 2), Point{1.0, 1.0});
  CHECK(nd.L_hat == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(nd.pairs > 100);
}

TEST_CASE("level Lipschitz estimate blows up near the kinkless flat minimum") {
  // grad of |x|^{3/2} is 1.5 sign(x) sqrt|x|: the pinned pair near 0 certifies
  // at least 1.5 / sqrt(x0)
  const Problem p = make_pow_abs(0.5);
  const auto res = estimate_level_lipschitz(p, Point{0.01});
  CHECK(res.L_hat >= 15.0);
  CHECK_FALSE(res.unbounded_scan);
}

TEST_CASE("level Lipschitz estimate is monotone in the grid resolution") {
  const Problem p = make_pow_abs(0.5);
  LevelSamplerConfig coarse, fine;
  coarse.grid_points = 10;
  fine.grid_points = 20;
  const double a = estimate_level_lipschitz(p, Point{0.5}, coarse).L_hat;
  const double b = estimate_level_lipschitz(p, Point{0.5}, fine).L_hat;
  CHECK(b >= a - 1e-12);
}

TEST_CASE("descent chain: equality at the exact stepsize on the quadratic") {
  const Problem p = make_quadratic(1.0, 1);
  const auto rows = verify_descent_chain(p, Point{1.0}, Point{0.0},
                                         {0.0, 0.25, 0.5, 0.75, 1.0}, 1.0);
  for (const auto& r : rows) CHECK(r.holds);
  CHECK(rows.front().lhs2 == doctest::Approx(0.0));
  CHECK(rows.front().rhs == doctest::Approx(0.0));
  CHECK(rows.back().lhs2 == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(rows.back().rhs == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_THROWS_AS(verify_descent_chain(p, Point{1.0}, Point{0.0}, {0.5}, 0.0),
                  std::invalid_argument);
}

TEST_CASE("descent chain holds on the strongly convex DC pair") {
  const Problem p = make_dc_quadratic(2.0, 1.0, 1);
  std::vector<double> alphas;
  for (int i = 0; i <= 10; ++i) alphas.push_back(0.05 * i);
  for (const auto& r : verify_descent_chain(p, Point{1.0}, Point{0.0}, alphas, 2.0))
    CHECK(r.holds);
}

TEST_CASE("growth probe: bounded curvature side exposes the exponent failure") {
  const Problem p = make_quadratic(1.0, 1);
  const auto probe = curvature_growth_probe(p, Point{0.0}, {1e-1, 1e-2, 1e-3, 1e-4}, 0.25,
                                            std::sqrt(2.0));
  REQUIRE(probe.rows.size() == 4);
  for (const auto& row : probe.rows) {
    CHECK(row.L_hat == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(row.rhs == doctest::Approx(std::pow(2.0, 0.25)).epsilon(1e-9));
    CHECK(row.sigma1 == doctest::Approx(row.r).epsilon(1e-12));
  }
  CHECK(probe.rows.back().lhs > probe.rows.front().lhs * 10.0);
  REQUIRE(probe.first_failure_radius);
  CHECK(probe.slope_lhs == doctest::Approx(-0.5).epsilon(1e-6));
}

TEST_CASE("growth probe: matching slopes for the non-Lipschitz power objective") {
  const Problem p = make_pow_abs(0.5);
  const auto probe = curvature_growth_probe(p, Point{0.0}, {1e-1, 1e-2, 1e-3, 1e-4},
                                            1.0 / 3.0, 1.0);
  for (const auto& row : probe.rows) CHECK(row.holds);
  CHECK(std::fabs(probe.slope_lhs - probe.slope_rhs) <= 0.05);
  CHECK(probe.slope_L == doctest::Approx(-0.5).epsilon(0.2));
  CHECK_THROWS_AS(curvature_growth_probe(p, Point{0.0}, {0.1}, 0.5, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(curvature_growth_probe(p, Point{0.0}, {-0.1}, 0.25, 1.0),
                  std::invalid_argument);
}

TEST_CASE("one-stop probe aggregates the measures") {
  const Problem p = make_dc_quadratic(2.0, 1.0, 1);
  const auto res = geometry_probe(p, Point{1.0}, std::make_pair(0.25, 1.0));
  CHECK(res.sigma1 == doctest::Approx(1.0));
  CHECK(res.sigma0 <= res.sigma1 + 1e-12);
  CHECK(res.d[0] == doctest::Approx(1.0));
  CHECK(res.L_hat == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(res.descent_chain.size() == 11);
  for (const auto& row : res.descent_chain) CHECK(row.holds);
  REQUIRE(res.bound_check);
}
