#ifndef PLK_SUITE_HPP
#define PLK_SUITE_HPP

#include "plk/io.hpp"

namespace plk {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
};

namespace suite_detail {

inline std::string num(double v) { return fmt(v); }

inline CriterionResult make(int id, std::string name) {
  CriterionResult r;
  r.id = id;
  r.name = std::move(name);
  return r;
}

// Value gaps with the trailing zero (or sub-floor) block removed; the rate
// classifiers see only the resolvable prefix.
inline std::vector<double> positive_prefix(const std::vector<double>& gaps) {
  std::vector<double> out;
  for (double g : gaps) {
    if (!(g > 0.0)) break;
    out.push_back(g);
  }
  return out;
}

// 1. The absolute-power objective admits no exact stationary iterate: the run
// only "terminates" once the iterate has underflowed past any meaningful
// resolution, and the gap decay is superlinear.
inline CriterionResult c1_no_finite_termination() {
  CriterionResult r = make(1, "pow_abs_superlinear_no_finite_stop");
  const Problem p = make_pow_abs(0.5);
  ProximalConfig cfg;
  cfg.lambda = 1.0;
  cfg.max_iters = 60;
  const Trajectory t = run_proximal(p, Point{1.0}, cfg);

  double gap_at_stop = std::numeric_limits<double>::infinity();
  bool stopped = false;
  for (std::size_t k = 0; k < t.size(); ++k) {
    const auto& rec = t.records[k];
    const bool stationary = rec.step_norm && *rec.step_norm <= kExactStepTol &&
                            rec.subgrad_dist && *rec.subgrad_dist <= kExactDistTol;
    const bool terminal_stationary = !rec.step_norm && k + 1 == t.size() &&
                                     t.termination == Termination::exact_stationary;
    if (stationary || terminal_stationary) {
      gap_at_stop = t.gap(k);
      stopped = true;
      break;
    }
  }
  const bool no_early_stop = !stopped || gap_at_stop <= 1e-30;

  const auto gaps = positive_prefix(t.value_gaps());
  const RateReport rate = classify_rate(GapSequence{gaps, GapSource::value_gap}, 0.0);
  const bool superlinear =
      rate.classification == RateClass::superlinear && rate.tail_ratio_last < 1e-3;

  r.passed = no_early_stop && superlinear;
  r.detail = "gap_at_stop=" + (stopped ? num(gap_at_stop) : std::string("none")) +
             " class=" + to_string(rate.classification) +
             " tail_ratio=" + num(rate.tail_ratio_last);
  return r;
}

// 2. The piecewise objective started on the linear branch reaches its
// minimizer exactly in 4 steps for both stepsizes.
inline CriterionResult c2_finite_termination() {
  CriterionResult r = make(2, "piecewise_finite_termination");
  const Problem p = make_piecewise_plus();
  bool ok = true;
  std::string detail;
  for (double lam : {0.3, 0.25}) {
    ProximalConfig cfg;
    cfg.lambda = lam;
    cfg.max_iters = 20;
    const Trajectory t = run_proximal(p, Point{-1.0}, cfg);
    const bool exact = t.termination == Termination::exact_stationary;
    std::size_t first_zero = t.size();
    for (std::size_t k = 0; k < t.size(); ++k)
      if (t.records[k].x[0] == 0.0) {
        first_zero = k;
        break;
      }
    const bool four_steps = first_zero == 4;
    ok = ok && exact && four_steps;
    detail += "lambda=" + num(lam) + ":steps=" + std::to_string(first_zero) +
              ",term=" + to_string(t.termination) + " ";
  }
  r.passed = ok;
  r.detail = detail;
  return r;
}

// 3. Exponent-1/2 quadratic: gap ratio locked at 1/4 and the certified
// constants reproduce the 1/(1+alpha) per-step bound.
inline CriterionResult c3_linear_rate() {
  CriterionResult r = make(3, "quadratic_linear_rate_envelope");
  const Problem p = make_quadratic(1.0, 1);
  ProximalConfig cfg;
  cfg.lambda = 1.0;
  cfg.max_iters = 40;
  const Trajectory t = run_proximal(p, Point{1.0}, cfg);

  const auto gaps = positive_prefix(t.value_gaps());
  double worst = 0.0;
  for (std::size_t k = 0; k + 1 < gaps.size(); ++k)
    worst = std::max(worst, std::fabs(gaps[k + 1] / gaps[k] - 0.25));
  const bool ratio_ok = worst <= 1e-10;

  const DescentCertificate cert = certify(t, &p);
  const bool a_ok = std::fabs(cert.a_max - 1.5) <= 1e-9;
  const bool b_ok = cert.b_min_h2 && std::fabs(*cert.b_min_h2 - 1.0) <= 1e-9;

  const PLKFit fit = estimate_plk_exponent(t, p);
  PLKProfile profile(DesingularizingFunction(fit.M_hat, 0.5), 1e6, 1e6);
  const auto env = envelope_check(t, profile, cert);
  const bool env_ok = !env.empty() && env.front().ok;

  r.passed = ratio_ok && a_ok && b_ok && env_ok;
  r.detail = "ratio_dev=" + num(worst) + " a_max=" + num(cert.a_max) +
             " b_min=" + num(cert.b_min_h2 ? *cert.b_min_h2 : -1.0) +
             " M_hat=" + num(fit.M_hat) +
             " env_bound=" + num(env.empty() ? -1.0 : env.front().bound);
  return r;
}

// 4. Exponent-3/4 power objective: a single fitted constant dominates the
// tail gaps under eta k^{-2}.
inline CriterionResult c4_sublinear_envelope() {
  CriterionResult r = make(4, "pow_abs_sublinear_envelope");
  const Problem p = make_pow_abs(3.0);
  ProximalConfig cfg;
  cfg.lambda = 1.0;
  cfg.max_iters = 200;
  const Trajectory t = run_proximal(p, Point{1.0}, cfg);

  const DescentCertificate cert = certify(t, &p);
  PLKProfile profile(DesingularizingFunction(1.0, 0.75), 1e6, 1e6);
  const auto env = envelope_check(t, profile, cert);
  bool found = false, ok = false;
  double eta = 0.0, viol = 0.0;
  for (const auto& e : env)
    if (e.check == "value_polynomial_envelope") {
      found = true;
      ok = e.ok;
      eta = e.fitted_const;
      viol = e.max_violation;
    }
  r.passed = found && ok && viol <= 0.0;
  r.detail = "eta=" + num(eta) + " max_rel_violation=" + num(viol);
  return r;
}

// 5. Exponent recovery: within 0.05 on real trajectories, within 1e-6 on an
// exact synthetic power law.
inline CriterionResult c5_exponent_recovery() {
  CriterionResult r = make(5, "plk_exponent_recovery");
  bool ok = true;
  std::string detail;
  struct Case {
    double alpha, lambda;
    std::size_t iters;
  };
  for (const Case c : {Case{0.5, 0.05, 60}, Case{1.0, 0.5, 40}, Case{3.0, 1.0, 200}}) {
    const Problem p = make_pow_abs(c.alpha);
    ProximalConfig cfg;
    cfg.lambda = c.lambda;
    cfg.max_iters = c.iters;
    const Trajectory t = run_proximal(p, Point{1.0}, cfg);
    const PLKFit fit = estimate_plk_exponent(t, p);
    const double q_true = c.alpha / (1.0 + c.alpha);
    ok = ok && std::fabs(fit.q_hat - q_true) <= 0.05;
    detail += "alpha=" + num(c.alpha) + ":q_hat=" + num(fit.q_hat) + " ";
  }
  {
    const double q = 0.4, M = 2.0;
    std::vector<double> gaps, dists;
    for (int k = 2; k <= 10; ++k) {
      const double g = std::pow(10.0, -k);
      gaps.push_back(g);
      dists.push_back(std::pow(g, q) / (M * (1.0 - q)));
    }
    const PLKFit fit = fit_plk_exponent(gaps, dists);
    ok = ok && std::fabs(fit.q_hat - q) <= 1e-6 && std::fabs(fit.M_hat - M) <= 1e-5;
    detail += "synthetic:q_hat=" + num(fit.q_hat) + ",M_hat=" + num(fit.M_hat);
  }
  r.passed = ok;
  r.detail = detail;
  return r;
}

// 6. Summation inequality fuzz: 1000 random monotone positive sequences per
// exponent.
inline CriterionResult c6_summation_inequality() {
  CriterionResult r = make(6, "summation_inequality_fuzz");
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::size_t failures = 0, total = 0;
  for (double q : {0.25, 0.75, 1.5}) {
    for (int trial = 0; trial < 1000; ++trial) {
      const std::size_t len = 5 + static_cast<std::size_t>(unif(rng) * 15);
      GapSequence seq;
      double a = 0.1 + 10.0 * unif(rng);
      for (std::size_t i = 0; i < len; ++i) {
        seq.values.push_back(a);
        a *= 0.05 + 0.9 * unif(rng);
      }
      const std::size_t l = len - 2;
      ++total;
      if (!lemma31_check(seq, q, 0, l).holds) ++failures;
    }
  }
  r.passed = failures == 0;
  r.detail = std::to_string(failures) + "/" + std::to_string(total) + " violations";
  return r;
}

// 7. The implicit recurrence a+sigma a^p: every simulated sequence satisfies
// it to 1e-12 relative and classifies superlinear.
inline CriterionResult c7_recurrence_superlinear() {
  CriterionResult r = make(7, "implicit_recurrence_superlinear");
  bool ok = true;
  std::string detail;
  for (double a0 : {1.0, 0.5, 2.0})
    for (double sigma : {0.5, 1.0})
      for (double pexp : {0.1, 0.3, 0.49}) {
        const GapSequence seq = lemma32_simulate(a0, sigma, pexp, 60);
        for (std::size_t k = 0; k + 1 < seq.values.size(); ++k) {
          const double resid = seq.values[k + 1] + sigma * std::pow(seq.values[k + 1], pexp) -
                               seq.values[k];
          if (std::fabs(resid) > 1e-12 * std::max(1.0, seq.values[k])) ok = false;
        }
        RateReport rep;
        try {
          rep = classify_rate(seq, 0.0);
        } catch (const std::exception&) {
          ok = false;
          detail += "p=" + num(pexp) + ":unclassified ";
          continue;
        }
        if (rep.classification != RateClass::superlinear) {
          ok = false;
          detail += "p=" + num(pexp) + ":" + to_string(rep.classification) + " ";
        }
      }
  r.passed = ok;
  if (detail.empty()) detail = "18/18 sequences superlinear, recurrence residual <= 1e-12";
  r.detail = detail;
  return r;
}

// 8. Line-search DC runs: per-step decrease beats (alpha lambda^2 + rho) /
// (1 + lambda)^2, relative error stays under the g-gradient modulus, and the
// strongly convex quadratic pair converges linearly in value.
inline CriterionResult c8_dc_certification() {
  CriterionResult r = make(8, "dc_linesearch_certification");
  bool ok = true;
  std::string detail;
  BDCAConfig cfg;
  cfg.lambda_bar = 0.5;
  cfg.max_iters = 30;

  auto check_runs = [&](const Problem& p, const std::vector<double>& starts, double L) {
    for (double s : starts) {
      const Trajectory t = run_bdca(p, Point{s}, cfg);
      const auto h1 = certify_h1(t);
      for (const auto& [k, margin] : h1.margins) {
        const auto& params = t.records[k].step_params;
        const auto it = params.find("lambda");
        if (it == params.end()) continue;
        const double lam = it->second;
        const double bound =
            (cfg.alpha * lam * lam + dc_parts(p).rho) / ((1.0 + lam) * (1.0 + lam));
        if (margin < bound - 1e-9) {
          ok = false;
          detail += p.id + ":x0=" + num(s) + ":h1_margin=" + num(margin) + "<" + num(bound) + " ";
        }
      }
      const auto h3 = certify_h3(t, p);
      if (!h3.b_min || *h3.b_min > L + 1e-9) {
        ok = false;
        detail += p.id + ":x0=" + num(s) + ":b_min_h3=" +
                  (h3.b_min ? num(*h3.b_min) : std::string("none")) + ">" + num(L) + " ";
      }
    }
  };
  const Problem quad = make_dc_quadratic(2.0, 1.0, 1);
  const Problem dabs = make_dc_abs(1.0, 1.0);
  check_runs(quad, {1.0, -2.0, 0.5, 3.0, -0.25}, *quad.dc->g_lipschitz);
  check_runs(dabs, {2.0, -1.5, 0.7, -0.3, 1.1}, *dabs.dc->g_lipschitz);

  const Trajectory t = run_bdca(quad, Point{1.0}, cfg);
  const auto gaps = positive_prefix(t.value_gaps());
  const RateReport rate = classify_rate(GapSequence{gaps, GapSource::value_gap}, 0.0);
  if (rate.classification != RateClass::linear) {
    ok = false;
    detail += "quad_rate=" + to_string(rate.classification) + " ";
  } else {
    detail += "quad_linear_factor=" + num(rate.linear_factor ? *rate.linear_factor : -1.0);
  }
  r.passed = ok;
  r.detail = detail;
  return r;
}

// 9. On the infinite power run the current-iterate relative-error ratios
// diverge (no finite constant) while the successor ratios certify 1/lambda.
inline CriterionResult c9_witness_placement() {
  CriterionResult r = make(9, "relative_error_witness_placement");
  const Problem p = make_pow_abs(0.5);
  ProximalConfig cfg;
  cfg.lambda = 1.0;
  cfg.max_iters = 60;
  const Trajectory t = run_proximal(p, Point{1.0}, cfg);

  const auto h3 = certify_h3(t, p);
  bool monotone = true, beyond = false;
  for (std::size_t i = 0; i + 1 < h3.ratios.size(); ++i)
    if (h3.ratios[i + 1].second < h3.ratios[i].second) monotone = false;
  for (const auto& [k, ratio] : h3.ratios)
    if (k < 40 && ratio > 1e3) beyond = true;

  const auto h2 = certify_h2(t, p);
  const bool h2_ok = h2.b_min && *h2.b_min <= 1.0 / cfg.lambda + 1e-9;

  r.passed = monotone && beyond && h2_ok;
  r.detail = std::string("h3_monotone=") + (monotone ? "1" : "0") +
             " h3_max=" + num(h3.ratios.empty() ? 0.0 : h3.ratios.back().second) +
             " b_min_h2=" + (h2.b_min ? num(*h2.b_min) : std::string("none"));
  return r;
}

// 10. Coexistence probe on synthetic geometric gaps: the crossover index
// matches the closed form for 2^{-k(1-2q)} < beta.
inline CriterionResult c10_coexistence_probe() {
  CriterionResult r = make(10, "coexistence_probe_crossover");
  const double q = 0.25, M = 1.0, b = 1.0;
  std::vector<double> gaps;
  for (int k = 0; k <= 40; ++k) gaps.push_back(std::pow(2.0, -k));
  bool ok = true;
  std::string detail;
  for (double a : {1.0, 0.01}) {
    const auto probe = inconsistency_probe(gaps, q, a, b, M);
    const double beta = a / ((1.0 - q) * (1.0 - q) * M * M * b * b);
    // first integer k with 2^{-k(1-2q)} < beta
    std::size_t expected = 0;
    while (std::pow(2.0, -(static_cast<double>(expected)) * (1.0 - 2.0 * q)) >= beta) ++expected;
    ok = ok && std::fabs(probe.beta - beta) <= 1e-12 && probe.first_violation &&
         *probe.first_violation == expected;
    detail += "a=" + num(a) + ":k=" +
              (probe.first_violation ? std::to_string(*probe.first_violation)
                                     : std::string("none")) +
              "(expect " + std::to_string(expected) + ") ";
  }
  r.passed = ok;
  r.detail = detail;
  return r;
}

// 11. Chained descent bound along the steepest DC direction, with equality at
// alpha = 1/L on the pure quadratic.
inline CriterionResult c11_descent_chain() {
  CriterionResult r = make(11, "descent_chain_bound");
  bool ok = true;
  std::string detail;
  {
    const Problem p = make_quadratic(1.0, 1);
    const double L = estimate_level_lipschitz(p, Point{1.0}).L_hat;
    std::vector<double> alphas;
    for (int i = 0; i <= 10; ++i) alphas.push_back(i / (10.0 * L));
    const auto rows = verify_descent_chain(p, Point{1.0}, *p.known_minimizer, alphas, L);
    for (const auto& row : rows)
      if (!row.holds) ok = false;
    const auto& last = rows.back();  // alpha = 1/L
    if (std::fabs(last.lhs2 - last.rhs) > 1e-10) ok = false;
    detail += "quad_eq_gap=" + num(std::fabs(last.lhs2 - last.rhs)) + " ";
  }
  {
    const Problem p = make_dc_quadratic(2.0, 1.0, 1);
    const double L = estimate_level_lipschitz(p, Point{1.0}).L_hat;
    std::vector<double> alphas;
    for (int i = 0; i <= 10; ++i) alphas.push_back(i / (10.0 * L));
    const auto rows = verify_descent_chain(p, Point{1.0}, *p.known_minimizer, alphas, L);
    for (const auto& row : rows)
      if (!row.holds) ok = false;
    detail += "dc_quad_rows=" + std::to_string(rows.size());
  }
  r.passed = ok;
  r.detail = detail;
  return r;
}

// 12. Growth signature: Lipschitz gradient keeps the curvature side bounded
// while the stationarity side blows up; the non-Lipschitz power objective has
// matching log-log slopes and a -1/2 Lipschitz-estimate slope.
inline CriterionResult c12_growth_signature() {
  CriterionResult r = make(12, "curvature_growth_signature");
  const std::vector<double> radii{1e-1, 1e-2, 1e-3, 1e-4};
  bool ok = true;
  std::string detail;
  {
    const Problem p = make_quadratic(1.0, 1);
    const auto probe = curvature_growth_probe(p, *p.known_minimizer, radii, 0.25,
                                              std::sqrt(2.0));
    double rhs_min = std::numeric_limits<double>::infinity(), rhs_max = 0.0;
    for (const auto& row : probe.rows) {
      rhs_min = std::min(rhs_min, row.rhs);
      rhs_max = std::max(rhs_max, row.rhs);
    }
    const bool rhs_bounded = rhs_max <= 2.0 * rhs_min;
    const bool lhs_grows = probe.rows.back().lhs > 10.0 * probe.rows.front().lhs;
    ok = ok && rhs_bounded && lhs_grows && probe.first_failure_radius.has_value();
    detail += "quad_fail_r=" +
              (probe.first_failure_radius ? num(*probe.first_failure_radius)
                                          : std::string("none")) +
              " ";
  }
  {
    const Problem p = make_pow_abs(0.5);
    const auto probe = curvature_growth_probe(p, *p.known_minimizer, radii, 1.0 / 3.0, 1.0);
    bool all_hold = true;
    for (const auto& row : probe.rows)
      if (!row.holds) all_hold = false;
    const bool slopes_match = std::fabs(probe.slope_lhs - probe.slope_rhs) <= 0.05;
    const bool L_slope_ok = std::fabs(probe.slope_L - (-0.5)) <= 0.1;
    ok = ok && all_hold && slopes_match && L_slope_ok;
    detail += "pow_slopes=(" + num(probe.slope_lhs) + "," + num(probe.slope_rhs) +
              ") slope_L=" + num(probe.slope_L);
  }
  r.passed = ok;
  r.detail = detail;
  return r;
}

// 13. Convergent-run battery: step summability, tail stabilization, and
// near-stationarity of the final iterate.
inline CriterionResult c13_global_convergence() {
  CriterionResult r = make(13, "global_convergence_battery");
  bool ok = true;
  std::string detail;

  auto check = [&](const Trajectory& t, const Problem& p, double h4_step_tol,
                   const std::string& tag) {
    const bool sum_ok = check_summability(t).tail_bound_ok;
    const bool h4_ok = certify_h4(t, h4_step_tol, 1e-8);
    const double final_dist = t.records.back().subgrad_dist
                                  ? *t.records.back().subgrad_dist
                                  : subgrad_dist(p, t.records.back().x);
    const bool stat_ok = final_dist <= 1e-8;
    if (!(sum_ok && h4_ok && stat_ok)) ok = false;
    detail += tag + ":sum=" + (sum_ok ? "1" : "0") + ",h4=" + (h4_ok ? "1" : "0") +
              ",dist=" + num(final_dist) + " ";
  };

  {
    const Problem p = make_quadratic(1.0, 1);
    ProximalConfig cfg;
    cfg.lambda = 1.0;
    cfg.max_iters = 60;
    cfg.step_tol = 1e-12;
    check(run_proximal(p, Point{1.0}, cfg), p, 1e-9, "proximal");
  }
  {
    const Problem p = make_dc_quadratic(2.0, 1.0, 1);
    BDCAConfig cfg;
    cfg.lambda_bar = 0.5;
    cfg.max_iters = 40;
    cfg.step_tol = 1e-12;
    check(run_bdca(p, Point{1.0}, cfg), p, 1e-9, "bdca");
  }
  {
    const Problem p = make_quadratic(1.0, 1);
    IRGConfig cfg;
    cfg.t0 = 0.5;
    cfg.error_ratio = 0.1;
    cfg.max_iters = 80;
    cfg.grad_tol = 1e-11;
    check(run_irg(p, Point{1.0}, cfg, 1301), p, 1e-7, "irg");
  }
  r.passed = ok;
  r.detail = detail;
  return r;
}

// 14. Determinism: repeating seeded runs yields byte-identical serialized
// artifacts.
inline CriterionResult c14_determinism() {
  CriterionResult r = make(14, "determinism_byte_identical");
  bool ok = true;
  std::string detail;
  {
    const Problem p = make_quadratic(1.0, 2);
    IRGConfig cfg;
    cfg.t0 = 0.4;
    cfg.error_ratio = 0.2;
    cfg.max_iters = 50;
    const Trajectory a = run_irg(p, Point{1.0, -0.5}, cfg, 99);
    const Trajectory b = run_irg(p, Point{1.0, -0.5}, cfg, 99);
    const bool same = trajectory_csv(a) == trajectory_csv(b) &&
                      trajectory_to_json(a).dump() == trajectory_to_json(b).dump();
    ok = ok && same;
    detail += std::string("irg=") + (same ? "1" : "0") + " ";
  }
  {
    const Problem p = make_pow_abs(0.5);
    const std::vector<double> radii{1e-1, 1e-2, 1e-3};
    const auto a = curvature_growth_probe(p, Point{0.0}, radii, 1.0 / 3.0, 1.0);
    const auto b = curvature_growth_probe(p, Point{0.0}, radii, 1.0 / 3.0, 1.0);
    const bool same = growth_probe_csv(a) == growth_probe_csv(b) &&
                      growth_probe_to_json(a).dump() == growth_probe_to_json(b).dump();
    ok = ok && same;
    detail += std::string("geometry=") + (same ? "1" : "0");
  }
  r.passed = ok;
  r.detail = detail;
  return r;
}

}  // namespace suite_detail

inline std::vector<CriterionResult> run_acceptance_suite() {
  using Fn = CriterionResult (*)();
  const Fn criteria[] = {
      suite_detail::c1_no_finite_termination, suite_detail::c2_finite_termination,
      suite_detail::c3_linear_rate,           suite_detail::c4_sublinear_envelope,
      suite_detail::c5_exponent_recovery,     suite_detail::c6_summation_inequality,
      suite_detail::c7_recurrence_superlinear, suite_detail::c8_dc_certification,
      suite_detail::c9_witness_placement,     suite_detail::c10_coexistence_probe,
      suite_detail::c11_descent_chain,        suite_detail::c12_growth_signature,
      suite_detail::c13_global_convergence,   suite_detail::c14_determinism,
  };
  std::vector<CriterionResult> results;
  int id = 1;
  for (Fn fn : criteria) {
    try {
      results.push_back(fn());
    } catch (const std::exception& e) {
      CriterionResult r;
      r.id = id;
      r.name = "criterion_" + std::to_string(id);
      r.passed = false;
      r.detail = std::string("exception: ") + e.what();
      results.push_back(r);
    }
    ++id;
  }
  std::sort(results.begin(), results.end(),
            [](const CriterionResult& a, const CriterionResult& b) { return a.id < b.id; });
  return results;
}

inline json suite_to_json(const std::vector<CriterionResult>& results) {
  json j = json::array();
  for (const auto& r : results)
    j.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
  return j;
}

}  // namespace plk

#endif  // PLK_SUITE_HPP
