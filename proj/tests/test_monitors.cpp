#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "plk/algorithms.hpp"
#include "plk/monitors.hpp"

using namespace plk;

namespace {

Trajectory quadratic_run(std::size_t iters = 30) {
  ProximalConfig cfg;
  cfg.lambda = 1.0;
  cfg.max_iters = iters;
  return run_proximal(make_quadratic(1.0, 1), Point{1.0}, cfg);
}

Trajectory synthetic(const std::vector<double>& values, const std::vector<double>& steps) {
  Trajectory t;
  for (std::size_t k = 0; k < values.size(); ++k) {
    IterateRecord r;
    r.k = k;
    r.x = Point{values[k]};
    r.value = values[k];
    r.subgrad_dist = 1.0;
    if (k < steps.size()) r.step_norm = steps[k];
    t.records.push_back(r);
  }
  return t;
}

}  // namespace

TEST_CASE("sufficient-decrease constant is extremal on the quadratic run") {
  // decrease 0.375 x^2 over step (x/2)^2: every margin is exactly 3/2, so the
  // certified constant is both attained and tight.
  const Trajectory t = quadratic_run();
  const auto h1 = certify_h1(t);
  CHECK_FALSE(h1.failed);
  CHECK(h1.a_max == doctest::Approx(1.5).epsilon(1e-12));
  for (const auto& [k, margin] : h1.margins) CHECK(margin == doctest::Approx(1.5).epsilon(1e-12));
  // any larger constant is violated at every step
  for (const auto& [k, margin] : h1.margins) CHECK(margin < 1.5 + 1e-9);
}

TEST_CASE("value increase trips the failure flag") {
  const Trajectory t = synthetic({1.0, 0.5, 0.75, 0.3}, {0.5, 0.5, 0.5});
  const auto h1 = certify_h1(t);
  CHECK(h1.failed);
  CHECK(h1.a_max == 0.0);
  CHECK_THROWS_AS(certify_h1(synthetic({1.0}, {})), std::invalid_argument);
}

TEST_CASE("successor relative-error constant equals 1/lambda on proximal runs") {
  for (double lam : {0.5, 1.0, 2.0}) {
    ProximalConfig cfg;
    cfg.lambda = lam;
    cfg.max_iters = 25;
    const Trajectory t = run_proximal(make_quadratic(1.0, 1), Point{1.0}, cfg);
    const auto h2 = certify_h2(t, make_quadratic(1.0, 1));
    REQUIRE(h2.b_min);
    CHECK(*h2.b_min == doctest::Approx(1.0 / lam).epsilon(1e-12));
    for (const auto& [k, ratio] : h2.ratios)
      CHECK(ratio == doctest::Approx(1.0 / lam).epsilon(1e-12));
  }
}

TEST_CASE("current-iterate relative error diverges on the lower-exponent power run") {
  const Problem p = make_pow_abs(0.5);
  ProximalConfig cfg;
  cfg.lambda = 1.0;
  cfg.max_iters = 60;
  const Trajectory t = run_proximal(p, Point{1.0}, cfg);
  const auto h3 = certify_h3(t, p);
  REQUIRE(h3.ratios.size() >= 4);
  for (std::size_t i = 0; i + 1 < h3.ratios.size(); ++i)
    CHECK(h3.ratios[i + 1].second >= h3.ratios[i].second);
  CHECK(h3.ratios.back().second > 1e3);
  const auto h2 = certify_h2(t, p);
  REQUIRE(h2.b_min);
  CHECK(*h2.b_min <= 1.0 + 1e-9);
}

TEST_CASE("witness fallback order: stored witness, stored distance, oracle") {
  Trajectory t = synthetic({1.0, 0.5, 0.25}, {0.5, 0.25});
  // stored distances only
  const auto h3a = certify_h3(t);
  REQUIRE(h3a.b_min);
  CHECK(*h3a.b_min == doctest::Approx(4.0));  // 1 / 0.25
  // stored witness takes precedence
  t.records[0].subgrad_witness = Point{2.0};
  const auto h3b = certify_h3(t);
  CHECK(*h3b.b_min == doctest::Approx(4.0));  // ratio at k=0 becomes 4 as well
  // no witness, no distance, no oracle: error
  Trajectory bare = synthetic({1.0, 0.5}, {0.5});
  bare.records[0].subgrad_dist.reset();
  bare.records[1].subgrad_dist.reset();
  CHECK_THROWS_AS(certify_h3(bare), std::runtime_error);
}

TEST_CASE("zero steps with nonzero subgradients are flagged, not ratioed") {
  Trajectory t = synthetic({1.0, 1.0, 0.5, 0.25}, {0.0, 0.5, 0.25});
  const auto h2 = certify_h2(t);
  CHECK(h2.flagged.size() == 1);
  CHECK(h2.flagged[0] == 0);
  CHECK(h2.ratios.size() == 2);
}

TEST_CASE("tail stabilization and summability on a geometric run") {
  ProximalConfig cfg;
  cfg.lambda = 1.0;
  cfg.max_iters = 60;
  cfg.step_tol = 1e-12;
  const Trajectory t = run_proximal(make_quadratic(1.0, 1), Point{1.0}, cfg);
  CHECK(certify_h4(t, 1e-9, 1e-10));
  CHECK_FALSE(certify_h4(t, 1e-16, 1e-30));  // unreachable tolerance
  const auto sum = check_summability(t);
  CHECK(sum.tail_bound_ok);
  CHECK(sum.partial_sum == doctest::Approx(1.0).epsilon(1e-6));  // telescoping to x0 - x_inf
  CHECK_THROWS_AS(certify_h4(synthetic({1.0, 0.5}, {0.5}), 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(check_summability(synthetic({1.0, 0.5}, {0.5})), std::invalid_argument);
}

TEST_CASE("primary descent constant for gradient runs") {
  ProximalConfig cfg;
  cfg.lambda = 1.0;
  cfg.max_iters = 20;
  const Trajectory t = run_proximal(make_quadratic(1.0, 1), Point{1.0}, cfg);
  const auto irg = certify_descent_conditions_irg(t);
  REQUIRE(irg.sigma);
  // decrease 0.375 x^2, grad * step = x * x/2 => sigma = 0.75
  CHECK(*irg.sigma == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(irg.complementary_ok);
}

TEST_CASE("aggregate certificate joins all conditions") {
  const Problem p = make_quadratic(1.0, 1);
  ProximalConfig cfg;
  cfg.lambda = 1.0;
  cfg.max_iters = 40;
  cfg.step_tol = 1e-12;
  const Trajectory t = run_proximal(p, Point{1.0}, cfg);
  const DescentCertificate cert = certify(t, &p, {}, 1e-9, 1e-10);
  CHECK(cert.a_max == doctest::Approx(1.5).epsilon(1e-12));
  REQUIRE(cert.b_min_h2);
  CHECK(*cert.b_min_h2 == doctest::Approx(1.0).epsilon(1e-12));
  REQUIRE(cert.b_min_h3);
  CHECK(*cert.b_min_h3 == doctest::Approx(2.0).epsilon(1e-12));  // x / (x/2)
  CHECK(cert.h4_ok);
  CHECK(cert.violations.empty());
  CHECK(cert.per_k_margins.size() >= 10);
}

TEST_CASE("index window restricts certification") {
  const Trajectory t = quadratic_run();
  IndexWindow w{5, 15};
  const auto h1 = certify_h1(t, w);
  CHECK(h1.margins.size() == 9);
  CHECK(h1.margins.front().first == 5);
  CHECK(h1.margins.back().first == 13);
}
