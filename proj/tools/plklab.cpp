// Command-line driver: run descent experiments, certify trajectories,
// classify rates, probe geometry, and execute the acceptance battery.

#include <iostream>

#include <CLI11.hpp>

#include "plk/plk.hpp"

namespace {

using plk::json;

int cmd_run(const std::string& config_path, const std::string& out_dir,
            const std::vector<std::string>& overrides, std::optional<std::uint64_t> seed) {
  json raw = plk::load_json(config_path);
  for (const auto& ov : overrides) plk::apply_override(raw, ov);
  if (seed) raw["rng_seed"] = *seed;
  plk::RunConfig cfg = plk::parse_run_config(raw);
  if (!out_dir.empty()) cfg.out_dir = out_dir;

  const plk::Trajectory t = plk::run_from_config(cfg);
  const std::filesystem::path dir(cfg.out_dir);
  plk::write_file(dir / "traj.csv", plk::trajectory_csv(t));
  plk::write_file(dir / "traj.json", plk::trajectory_to_json(t, cfg.problem).dump(2) + "\n");
  std::cout << "wrote " << (dir / "traj.csv").string() << " (" << t.size() << " records, "
            << plk::to_string(t.termination) << ")\n";
  return 0;
}

int cmd_monitor(const std::string& traj_path, const std::string& out_dir) {
  const json j = plk::load_json(traj_path);
  const plk::Trajectory t = plk::trajectory_from_json(j);
  std::optional<plk::Problem> p;
  if (j.contains("problem")) p = plk::make_problem(j.at("problem"));
  const plk::DescentCertificate cert = plk::certify(t, p ? &*p : nullptr);
  const std::filesystem::path dir(out_dir.empty() ? "out" : out_dir);
  plk::write_file(dir / "certificate.json", plk::certificate_to_json(cert).dump(2) + "\n");
  std::cout << "a_max=" << plk::fmt(cert.a_max)
            << " b_min_h2=" << (cert.b_min_h2 ? plk::fmt(*cert.b_min_h2) : "none")
            << " b_min_h3=" << (cert.b_min_h3 ? plk::fmt(*cert.b_min_h3) : "none")
            << " h4=" << (cert.h4_ok ? "ok" : "not-ok") << "\n";
  return 0;
}

int cmd_rate(const std::string& traj_path, const std::string& out_dir,
             std::optional<double> q, std::optional<double> M, double tol_zero) {
  const json j = plk::load_json(traj_path);
  const plk::Trajectory t = plk::trajectory_from_json(j);
  std::vector<double> gaps;
  for (double g : t.value_gaps()) {
    if (!(g > 0.0)) break;
    gaps.push_back(g);
  }
  plk::RateReport rep = plk::classify_rate(plk::GapSequence{gaps, plk::GapSource::value_gap},
                                           tol_zero);
  if (q && M) {
    std::optional<plk::Problem> p;
    if (j.contains("problem")) p = plk::make_problem(j.at("problem"));
    const plk::DescentCertificate cert = plk::certify(t, p ? &*p : nullptr);
    plk::PLKProfile profile(plk::DesingularizingFunction(*M, *q), 1e6, 1e6);
    rep.envelope_checks = plk::envelope_check(t, profile, cert);
  }
  const std::filesystem::path dir(out_dir.empty() ? "out" : out_dir);
  plk::write_file(dir / "rate.json", plk::rate_report_to_json(rep).dump(2) + "\n");
  std::cout << "classification=" << plk::to_string(rep.classification) << "\n";
  return 0;
}

int cmd_geometry(const std::string& config_path, const std::string& out_dir,
                 const std::vector<std::string>& overrides) {
  json cfg = plk::load_json(config_path);
  for (const auto& ov : overrides) plk::apply_override(cfg, ov);
  if (!cfg.contains("problem"))
    throw std::invalid_argument("geometry config: missing key 'problem'");
  const plk::Problem p = plk::make_problem(cfg.at("problem"));
  const std::filesystem::path dir(out_dir.empty() ? "out" : out_dir);

  if (cfg.contains("radii")) {
    std::vector<double> radii;
    for (const auto& r : cfg.at("radii")) radii.push_back(r.get<double>());
    const double q = cfg.at("q").get<double>();
    const double M = cfg.at("M").get<double>();
    plk::Point xbar = cfg.contains("xbar") ? plk::point_from_json(cfg.at("xbar"))
                                           : (p.known_minimizer ? *p.known_minimizer
                                                                : plk::Point(p.dim, 0.0));
    const auto probe = plk::curvature_growth_probe(p, xbar, radii, q, M);
    plk::write_file(dir / "probe.csv", plk::growth_probe_csv(probe));
    plk::write_file(dir / "probe.json", plk::growth_probe_to_json(probe).dump(2) + "\n");
    std::cout << "slope_lhs=" << plk::fmt(probe.slope_lhs)
              << " slope_rhs=" << plk::fmt(probe.slope_rhs)
              << " slope_L=" << plk::fmt(probe.slope_L) << "\n";
    return 0;
  }

  if (!cfg.contains("x0")) throw std::invalid_argument("geometry config: missing key 'x0'");
  const plk::Point x0 = plk::point_from_json(cfg.at("x0"));
  std::optional<std::pair<double, double>> qM;
  if (cfg.contains("q") && cfg.contains("M"))
    qM = {cfg.at("q").get<double>(), cfg.at("M").get<double>()};
  const auto res = plk::geometry_probe(p, x0, qM);
  json out;
  out["x0"] = plk::point_to_json(res.x0);
  out["sigma0"] = res.sigma0;
  out["sigma1"] = res.sigma1;
  out["v1"] = plk::point_to_json(res.v1);
  out["d"] = plk::point_to_json(res.d);
  out["L_hat"] = res.L_hat;
  out["L_unbounded_scan"] = res.L_unbounded_scan;
  json chain = json::array();
  for (const auto& row : res.descent_chain)
    chain.push_back({{"alpha", row.alpha},
                     {"lhs1", row.lhs1},
                     {"lhs2", row.lhs2},
                     {"rhs", row.rhs},
                     {"holds", row.holds}});
  out["descent_chain"] = chain;
  plk::write_file(dir / "probe.json", out.dump(2) + "\n");
  std::cout << "sigma0=" << plk::fmt(res.sigma0) << " sigma1=" << plk::fmt(res.sigma1)
            << " L_hat=" << plk::fmt(res.L_hat) << "\n";
  return 0;
}

int cmd_lemma_sum(double q, int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  int failures = 0;
  for (int t = 0; t < trials; ++t) {
    plk::GapSequence seq;
    const std::size_t len = 5 + static_cast<std::size_t>(unif(rng) * 15);
    double a = 0.1 + 10.0 * unif(rng);
    for (std::size_t i = 0; i < len; ++i) {
      seq.values.push_back(a);
      a *= 0.05 + 0.9 * unif(rng);
    }
    if (!plk::lemma31_check(seq, q, 0, len - 2).holds) ++failures;
  }
  std::cout << "summation inequality: " << failures << "/" << trials << " violations (q="
            << plk::fmt(q) << ")\n";
  return failures == 0 ? 0 : 1;
}

int cmd_lemma_recurrence(double a0, double sigma, double p, int n, const std::string& out_dir) {
  const plk::GapSequence seq = plk::lemma32_simulate(a0, sigma, p, n);
  std::string csv = "k,a_k\n";
  for (std::size_t k = 0; k < seq.values.size(); ++k)
    csv += std::to_string(k) + "," + plk::fmt(seq.values[k]) + "\n";
  const std::filesystem::path dir(out_dir.empty() ? "out" : out_dir);
  plk::write_file(dir / "recurrence.csv", csv);
  const plk::RateReport rep = plk::classify_rate(seq, 0.0);
  std::cout << "simulated " << seq.values.size() << " terms, classification="
            << plk::to_string(rep.classification) << "\n";
  return 0;
}

int cmd_suite(const std::string& out_dir) {
  const auto results = plk::run_acceptance_suite();
  bool all = true;
  for (const auto& r : results) {
    std::cout << (r.passed ? "PASS" : "FAIL") << "  " << r.id << "  " << r.name << "  "
              << r.detail << "\n";
    if (!r.passed) all = false;
  }
  const std::filesystem::path dir(out_dir.empty() ? "out" : out_dir);
  plk::write_file(dir / "suite.json", plk::suite_to_json(results).dump(2) + "\n");
  std::cout << (all ? "all criteria passed" : "acceptance failure") << "\n";
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"descent-laboratory experiment runner"};
  app.require_subcommand(1);

  std::string config_path, out_dir, traj_path;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::uint64_t seed_raw = 0;

  auto* run = app.add_subcommand("run", "run a configured experiment");
  run->add_option("--config", config_path, "JSON run configuration")->required();
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--override", overrides, "dotted-path override key=value");
  auto* seed_opt = run->add_option("--seed", seed_raw, "RNG seed override");

  auto* monitor = app.add_subcommand("monitor", "certify a stored trajectory");
  monitor->add_option("--traj", traj_path, "trajectory JSON sidecar")->required();
  monitor->add_option("--out", out_dir, "output directory");

  double q = 0.0, M = 0.0, tol_zero = 0.0;
  auto* rate = app.add_subcommand("rate", "classify the rate of a stored trajectory");
  rate->add_option("--traj", traj_path, "trajectory JSON sidecar")->required();
  rate->add_option("--out", out_dir, "output directory");
  auto* q_opt = rate->add_option("--q", q, "declared exponent for the envelope check");
  auto* m_opt = rate->add_option("--M", M, "declared modulus for the envelope check");
  rate->add_option("--tol-zero", tol_zero, "gap threshold treated as exact zero");

  auto* geometry = app.add_subcommand("geometry", "stationarity/curvature probes");
  geometry->add_option("--config", config_path, "JSON probe configuration")->required();
  geometry->add_option("--out", out_dir, "output directory");
  geometry->add_option("--override", overrides, "dotted-path override key=value");

  std::string lemma_mode = "recurrence";
  double la0 = 1.0, lsigma = 0.5, lp = 0.3, lq = 0.25;
  int ln = 60, ltrials = 1000;
  auto* lemma = app.add_subcommand("lemma", "sequence-inequality oracles");
  lemma->add_option("--mode", lemma_mode, "sum | recurrence")
      ->check(CLI::IsMember({"sum", "recurrence"}));
  lemma->add_option("--q", lq, "exponent of the summation inequality");
  lemma->add_option("--trials", ltrials, "fuzz trial count");
  lemma->add_option("--seed", seed_raw, "fuzz RNG seed");
  lemma->add_option("--a0", la0, "recurrence start value");
  lemma->add_option("--sigma", lsigma, "recurrence coefficient");
  lemma->add_option("--p", lp, "recurrence exponent in (0,1)");
  lemma->add_option("--n", ln, "maximum terms");
  lemma->add_option("--out", out_dir, "output directory");

  auto* suite = app.add_subcommand("suite", "run the acceptance battery");
  suite->add_option("--out", out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);
  if (seed_opt->count() > 0) seed = seed_raw;

  try {
    if (run->parsed()) return cmd_run(config_path, out_dir, overrides, seed);
    if (monitor->parsed()) return cmd_monitor(traj_path, out_dir);
    if (rate->parsed())
      return cmd_rate(traj_path, out_dir,
                      q_opt->count() ? std::optional<double>(q) : std::nullopt,
                      m_opt->count() ? std::optional<double>(M) : std::nullopt, tol_zero);
    if (geometry->parsed()) return cmd_geometry(config_path, out_dir, overrides);
    if (lemma->parsed())
      return lemma_mode == "sum" ? cmd_lemma_sum(lq, ltrials, seed_raw)
                                 : cmd_lemma_recurrence(la0, lsigma, lp, ln, out_dir);
    if (suite->parsed()) return cmd_suite(out_dir);
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
