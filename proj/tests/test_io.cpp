#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "plk/io.hpp"

using namespace plk;

namespace {

Trajectory sample_run() {
  ProximalConfig cfg;
  cfg.lambda = 1.0;
  cfg.max_iters = 8;
  return run_proximal(make_quadratic(1.0, 2), Point{1.0, -0.5}, cfg);
}

}  // namespace

TEST_CASE("problem construction from config fragments") {
  CHECK(make_problem({{"kind", "pow_abs"}, {"alpha", 0.5}}).id == "pow_abs(0.5)");
  CHECK(make_problem({{"kind", "piecewise_plus"}}).id == "piecewise_plus");
  CHECK(make_problem({{"kind", "quadratic"}, {"c", 2.0}, {"n", 3}}).dim == 3);
  CHECK(make_problem({{"kind", "dc_quadratic"}, {"a_g", 2.0}, {"a_h", 1.0}}).dc->rho == 1.0);
  CHECK(make_problem({{"kind", "dc_abs"}, {"c", 1.0}, {"rho", 1.0}}).dim == 1);
  CHECK_THROWS_AS(make_problem({{"kind", "mystery"}}), std::invalid_argument);
  CHECK_THROWS_AS(make_problem(json::object()), std::invalid_argument);
}

TEST_CASE("trajectory CSV: header shape and deterministic formatting") {
  const Trajectory t = sample_run();
  const std::string csv = trajectory_csv(t);
  CHECK(csv.rfind("k,x_0,x_1,value,gap,step_norm,subgrad_dist\n", 0) == 0);
  CHECK(csv == trajectory_csv(t));  // byte-stable
  // one header plus one line per record
  std::size_t lines = 0;
  for (char c : csv)
    if (c == '\n') ++lines;
  CHECK(lines == t.size() + 1);
}

TEST_CASE("trajectory JSON round-trip preserves every field") {
  const Trajectory t = sample_run();
  const json spec = {{"kind", "quadratic"}, {"c", 1.0}, {"n", 2}};
  const json j = trajectory_to_json(t, spec);
  const Trajectory back = trajectory_from_json(j);
  REQUIRE(back.size() == t.size());
  CHECK(back.problem_id == t.problem_id);
  CHECK(back.algorithm_id == t.algorithm_id);
  CHECK(back.termination == t.termination);
  CHECK(*back.reference_point == *t.reference_point);
  for (std::size_t k = 0; k < t.size(); ++k) {
    CHECK(back.records[k].x == t.records[k].x);
    CHECK(back.records[k].value == t.records[k].value);
    CHECK(back.records[k].step_norm == t.records[k].step_norm);
    CHECK(back.records[k].subgrad_dist == t.records[k].subgrad_dist);
    CHECK(back.records[k].subgrad_witness == t.records[k].subgrad_witness);
    CHECK(back.records[k].step_params == t.records[k].step_params);
  }
  // the embedded spec reconstructs a working oracle
  const Problem p = make_problem(j.at("problem"));
  CHECK(evaluate(p, back.records[0].x) == doctest::Approx(back.records[0].value));
}

TEST_CASE("run config parsing and validation") {
  json cfg = {{"problem", {{"kind", "quadratic"}, {"c", 1.0}}},
              {"algorithm", {{"kind", "proximal"}, {"lambda", 1.0}, {"max_iters", 5}}},
              {"x0", {1.0}},
              {"rng_seed", 7},
              {"tolerances", {{"step_tol", 1e-9}}}};
  const RunConfig rc = parse_run_config(cfg);
  CHECK(rc.x0 == Point{1.0});
  CHECK(rc.rng_seed == 7);
  const Trajectory t = run_from_config(rc);
  CHECK(t.size() == 6);
  CHECK(t.algorithm_id == "proximal");

  json bad = cfg;
  bad.erase("problem");
  CHECK_THROWS_WITH_AS(parse_run_config(bad), "config: missing key 'problem'",
                       std::invalid_argument);
  bad = cfg;
  bad["tolerances"]["step_tol"] = -1.0;
  CHECK_THROWS_AS(parse_run_config(bad), std::invalid_argument);
  bad = cfg;
  bad["algorithm"]["kind"] = "mystery";
  CHECK_THROWS_AS(run_from_config(parse_run_config(bad)), std::invalid_argument);
}

TEST_CASE("config dispatch covers all drivers") {
  json base = {{"problem", {{"kind", "dc_quadratic"}, {"a_g", 2.0}, {"a_h", 1.0}}},
               {"algorithm", {{"kind", "bdca"}, {"max_iters", 5}}},
               {"x0", {1.0}}};
  CHECK(run_from_config(parse_run_config(base)).algorithm_id == "bdca");
  base["algorithm"]["kind"] = "dca";
  CHECK(run_from_config(parse_run_config(base)).algorithm_id == "dca");
  base["problem"] = {{"kind", "quadratic"}, {"c", 1.0}};
  base["algorithm"] = {{"kind", "irg"}, {"t0", 0.5}, {"error_ratio", 0.1}, {"max_iters", 5}};
  base["rng_seed"] = 3;
  const Trajectory t = run_from_config(parse_run_config(base));
  CHECK(t.algorithm_id == "irg");
  CHECK(t.size() == 6);
}

TEST_CASE("dotted-path overrides") {
  json cfg = {{"algorithm", {{"lambda", 1.0}}}};
  apply_override(cfg, "algorithm.lambda=0.5");
  CHECK(cfg["algorithm"]["lambda"] == 0.5);
  apply_override(cfg, "algorithm.kind=proximal");
  CHECK(cfg["algorithm"]["kind"] == "proximal");
  apply_override(cfg, "tolerances.step_tol=1e-9");
  CHECK(cfg["tolerances"]["step_tol"] == 1e-9);
  apply_override(cfg, "output.flags.verbose=true");
  CHECK(cfg["output"]["flags"]["verbose"] == true);
  CHECK_THROWS_AS(apply_override(cfg, "no_equals_sign"), std::invalid_argument);
  CHECK_THROWS_AS(apply_override(cfg, "a..b=1"), std::invalid_argument);
}

TEST_CASE("fmt emits round-trippable shortest forms") {
  CHECK(fmt(0.25) == "0.25");
  CHECK(fmt(0.0) == "0");
  CHECK(std::stod(fmt(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(std::stod(fmt(1e-300)) == 1e-300);
}

TEST_CASE("file round trip and JSON load errors") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "plk_io_test";
  fs::remove_all(dir);
  write_file(dir / "a.json", "{\"x\": 1}\n");
  CHECK(load_json(dir / "a.json").at("x") == 1);
  write_file(dir / "b.json", "not json");
  CHECK_THROWS_AS(load_json(dir / "b.json"), std::invalid_argument);
  CHECK_THROWS_AS(load_json(dir / "missing.json"), std::invalid_argument);
  fs::remove_all(dir);
}

TEST_CASE("certificate and report serialization keys") {
  const Trajectory t = sample_run();
  const Problem p = make_quadratic(1.0, 2);
  const json cert = certificate_to_json(certify(t, &p));
  CHECK(cert.contains("a_max"));
  CHECK(cert.contains("b_min_h2"));
  CHECK(cert.contains("per_k_margins"));

  RateReport rep;
  rep.classification = RateClass::linear;
  rep.linear_factor = 0.25;
  const json jr = rate_report_to_json(rep);
  CHECK(jr.at("classification") == "linear");
  CHECK(jr.at("linear_factor") == 0.25);
}
