#ifndef PLK_ALGORITHMS_HPP
#define PLK_ALGORITHMS_HPP

#include <random>

#include "plk/problems.hpp"

namespace plk {

struct ProximalConfig {
  double lambda = 1.0;                 // constant stepsize, used when schedule is empty
  std::vector<double> lambda_schedule; // per-k stepsizes (cycled if shorter than the run)
  std::size_t max_iters = 100;
  double step_tol = 0.0;
  double value_tol = 0.0;

  double lambda_at(std::size_t k) const {
    if (lambda_schedule.empty()) return lambda;
    return lambda_schedule[k % lambda_schedule.size()];
  }
  double lambda_min() const {
    if (lambda_schedule.empty()) return lambda;
    double m = lambda_schedule[0];
    for (double l : lambda_schedule) m = std::min(m, l);
    return m;
  }
  double lambda_max() const {
    if (lambda_schedule.empty()) return lambda;
    double m = lambda_schedule[0];
    for (double l : lambda_schedule) m = std::max(m, l);
    return m;
  }
};

struct BDCAConfig {
  double alpha = 0.1;        // sufficient-decrease weight of the line search
  double lambda_bar = 1.0;   // initial trial stepsize (0 reduces to DCA)
  double beta = 0.5;         // backtracking shrink factor
  std::size_t max_backtracks = 50;
  std::size_t max_iters = 100;
  double step_tol = 1e-12;
};

enum class IRGStepRule { constant, backtracking };

struct IRGConfig {
  IRGStepRule stepsize_rule = IRGStepRule::constant;
  double t0 = 0.5;            // constant stepsize, or the trial stepsize per iteration
  double beta_decrease = 0.5; // descent coefficient certified by backtracking
  double error_ratio = 0.0;   // nu: relative gradient perturbation bound
  std::size_t max_iters = 100;
  double grad_tol = 0.0;
};

namespace detail {

inline void validate_start(const Problem& p, const Point& x0) {
  check_dim(p, x0);
  if (!is_finite(x0)) throw std::invalid_argument("starting point has non-finite coordinates");
}

inline void finalize(Trajectory& t, const Problem& p) {
  if (p.known_minimizer) {
    t.reference_point = *p.known_minimizer;
  } else if (!t.records.empty()) {
    t.reference_point = t.records.back().x;
  }
  t.reference_value = t.reference_point ? p.value_oracle(*t.reference_point) : 0.0;
}

}  // namespace detail

// x^{k+1} = argmin phi(.) + ||. - x^k||^2 / (2 lambda_k). The prox optimality
// identity puts w^{k+1} = (x^k - x^{k+1}) / lambda_k into the subdifferential
// at the successor; it is stored as that record's witness.
inline Trajectory run_proximal(const Problem& p, const Point& x0, const ProximalConfig& cfg) {
  detail::validate_start(p, x0);
  if (!(cfg.lambda_min() > 0.0))
    throw std::invalid_argument("run_proximal: all lambda_k must be positive");

  Trajectory t;
  t.problem_id = p.id;
  t.algorithm_id = "proximal";
  t.termination = Termination::max_iters;

  Point x = x0;
  std::optional<Point> pending_witness;
  for (std::size_t k = 0;; ++k) {
    IterateRecord rec;
    rec.k = k;
    rec.x = x;
    rec.value = evaluate(p, x);
    rec.subgrad_dist = subgrad_dist(p, x);
    rec.subgrad_witness = pending_witness;
    if (k >= cfg.max_iters) {
      t.records.push_back(std::move(rec));
      t.termination = Termination::max_iters;
      break;
    }
    const double lam = cfg.lambda_at(k);
    rec.step_params["lambda"] = lam;
    Point u;
    try {
      u = prox_step(p, x, lam);
    } catch (const std::exception& e) {
      throw std::runtime_error("run_proximal: prox solver failed at iterate " +
                               std::to_string(k) + ": " + e.what());
    }
    const double step = distance(x, u);
    rec.step_norm = step;
    t.records.push_back(std::move(rec));

    Point w(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) w[i] = (x[i] - u[i]) / lam;
    pending_witness = w;

    const double dist_u = subgrad_dist(p, u);
    const double value_u = evaluate(p, u);
    const double value_x = t.records.back().value;
    x = u;
    if (step <= kExactStepTol && dist_u <= kExactDistTol) {
      IterateRecord fin;
      fin.k = k + 1;
      fin.x = x;
      fin.value = value_u;
      fin.subgrad_dist = dist_u;
      fin.subgrad_witness = pending_witness;
      t.records.push_back(std::move(fin));
      t.termination = Termination::exact_stationary;
      break;
    }
    if (step <= cfg.step_tol || value_x - value_u <= cfg.value_tol) {
      IterateRecord fin;
      fin.k = k + 1;
      fin.x = x;
      fin.value = value_u;
      fin.subgrad_dist = dist_u;
      fin.subgrad_witness = pending_witness;
      t.records.push_back(std::move(fin));
      t.termination = step <= cfg.step_tol ? Termination::converged_step_tol
                                           : Termination::value_flat;
      break;
    }
  }
  detail::finalize(t, p);
  return t;
}

// BDCA: convex subproblem grad g(y) = u_k with u_k the minimum-norm element
// of the h-subdifferential, then a backtracking line search along d = y - x.
// The witness grad g(x^k) - grad g(y^k) lands in the symmetric subdifferential
// at x^k. Exhausted backtracking degrades the step to plain DCA (lambda = 0)
// and flags the record.
inline Trajectory run_bdca(const Problem& p, const Point& x0, const BDCAConfig& cfg,
                           const char* algorithm_id = "bdca") {
  detail::validate_start(p, x0);
  const DCParts& dc = dc_parts(p);
  if (!(dc.rho > 0.0))
    throw std::runtime_error("run_bdca: DC pair of '" + p.id + "' is not strongly convex");
  if (!(cfg.alpha > 0.0) || !(cfg.beta > 0.0 && cfg.beta < 1.0) || cfg.lambda_bar < 0.0)
    throw std::invalid_argument("run_bdca: requires alpha > 0, beta in (0,1), lambda_bar >= 0");

  auto solve_subproblem = [&](const Point& u) -> Point {
    if (dc.g_grad_inverse) return dc.g_grad_inverse(u);
    if (p.dim == 1) {
      // grad g is strictly increasing in 1-D; expand a bracket then bisect
      double lo = -1.0, hi = 1.0;
      for (int i = 0; i < 200 && dc.g_grad(Point{lo})[0] > u[0]; ++i) lo *= 2.0;
      for (int i = 0; i < 200 && dc.g_grad(Point{hi})[0] < u[0]; ++i) hi *= 2.0;
      const double y =
          detail::bisect_increasing([&](double v) { return dc.g_grad(Point{v})[0] - u[0]; }, lo, hi);
      return Point{y};
    }
    throw std::runtime_error("run_bdca: no subproblem solver for '" + p.id + "'");
  };

  Trajectory t;
  t.problem_id = p.id;
  t.algorithm_id = algorithm_id;
  t.termination = Termination::max_iters;

  Point x = x0;
  for (std::size_t k = 0;; ++k) {
    IterateRecord rec;
    rec.k = k;
    rec.x = x;
    rec.value = evaluate(p, x);
    rec.subgrad_dist = subgrad_dist(p, x);

    const Point u = dc.h_subdiff(x).min_norm_element();
    const Point y = solve_subproblem(u);
    Point d(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) d[i] = y[i] - x[i];
    const double dnorm = norm(d);

    const Point gx = dc.g_grad(x);
    Point w(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) w[i] = gx[i] - u[i];
    rec.subgrad_witness = w;
    rec.step_params["d_norm"] = dnorm;

    if (dnorm <= cfg.step_tol || k >= cfg.max_iters) {
      t.records.push_back(std::move(rec));
      if (k >= cfg.max_iters && dnorm > cfg.step_tol) {
        t.termination = Termination::max_iters;
      } else {
        t.termination = (dnorm <= kExactStepTol && *t.records.back().subgrad_dist <= kExactDistTol)
                            ? Termination::exact_stationary
                            : Termination::converged_step_tol;
      }
      break;
    }

    double lambda = cfg.lambda_bar;
    std::size_t backtracks = 0;
    bool linesearch_failed = false;
    if (lambda > 0.0) {
      const double phi_y = evaluate(p, y);
      while (true) {
        Point trial(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) trial[i] = y[i] + lambda * d[i];
        if (evaluate(p, trial) <= phi_y - cfg.alpha * lambda * lambda * dnorm * dnorm) break;
        lambda *= cfg.beta;
        if (++backtracks > cfg.max_backtracks) {
          lambda = 0.0;
          linesearch_failed = true;
          break;
        }
      }
    }

    Point xn(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) xn[i] = y[i] + lambda * d[i];
    const double step = distance(x, xn);
    rec.step_norm = step;
    rec.step_params["lambda"] = lambda;
    rec.step_params["backtracks"] = static_cast<double>(backtracks);
    if (linesearch_failed) rec.step_params["linesearch_failed"] = 1.0;
    t.records.push_back(std::move(rec));

    x = xn;
    if (step <= cfg.step_tol) {
      IterateRecord fin;
      fin.k = k + 1;
      fin.x = x;
      fin.value = evaluate(p, x);
      fin.subgrad_dist = subgrad_dist(p, x);
      t.records.push_back(std::move(fin));
      t.termination = (step <= kExactStepTol && *t.records.back().subgrad_dist <= kExactDistTol)
                          ? Termination::exact_stationary
                          : Termination::converged_step_tol;
      break;
    }
  }
  detail::finalize(t, p);
  return t;
}

inline Trajectory run_dca(const Problem& p, const Point& x0, BDCAConfig cfg) {
  cfg.lambda_bar = 0.0;
  return run_bdca(p, x0, cfg, "dca");
}

// Inexact gradient step x^{k+1} = x^k - t_k (grad phi(x^k) + e_k) with
// ||e_k|| <= nu ||grad phi(x^k)||, the perturbation drawn from the seeded
// generator. The record stores the exact gradient (as witness and as
// subgrad_dist) together with t_k and the perturbation size.
inline Trajectory run_irg(const Problem& p, const Point& x0, const IRGConfig& cfg,
                          std::uint64_t seed) {
  detail::validate_start(p, x0);
  if (!(cfg.t0 > 0.0)) throw std::invalid_argument("run_irg: t0 must be positive");
  if (!(cfg.error_ratio >= 0.0 && cfg.error_ratio < 1.0))
    throw std::invalid_argument("run_irg: error_ratio must lie in [0,1)");

  auto gradient = [&](const Point& x) -> Point {
    SubgradientSet s = subgrad_set(p, x);
    if (s.kind != SubgradSetKind::singleton)
      throw std::runtime_error("run_irg: objective not differentiable at an iterate of '" + p.id + "'");
    return s.point;
  };

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  Trajectory t;
  t.problem_id = p.id;
  t.algorithm_id = "irg";
  t.termination = Termination::max_iters;

  Point x = x0;
  for (std::size_t k = 0;; ++k) {
    const Point g = gradient(x);
    const double gnorm = norm(g);

    IterateRecord rec;
    rec.k = k;
    rec.x = x;
    rec.value = evaluate(p, x);
    rec.subgrad_dist = gnorm;
    rec.subgrad_witness = g;

    if (gnorm <= cfg.grad_tol || k >= cfg.max_iters) {
      t.records.push_back(std::move(rec));
      if (gnorm <= cfg.grad_tol)
        t.termination = gnorm <= kExactDistTol ? Termination::exact_stationary
                                               : Termination::converged_step_tol;
      else
        t.termination = Termination::max_iters;
      break;
    }

    Point gt = g;
    double err_norm = 0.0;
    if (cfg.error_ratio > 0.0) {
      Point e(x.size());
      double en = 0.0;
      for (auto& c : e) {
        c = gauss(rng);
        en += c * c;
      }
      en = std::sqrt(en);
      const double target = cfg.error_ratio * gnorm * unif(rng);
      if (en > 0.0) {
        for (std::size_t i = 0; i < e.size(); ++i) e[i] *= target / en;
        err_norm = target;
      }
      for (std::size_t i = 0; i < gt.size(); ++i) gt[i] += e[i];
    }

    double tk = cfg.t0;
    if (cfg.stepsize_rule == IRGStepRule::backtracking) {
      const double gtn2 = norm(gt) * norm(gt);
      const double phix = rec.value;
      while (true) {
        Point trial(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) trial[i] = x[i] - tk * gt[i];
        if (phix - evaluate(p, trial) >= cfg.beta_decrease * tk * gtn2) break;
        tk *= 0.5;
        if (tk < 1e-12)
          throw std::runtime_error("run_irg: stepsize underflow at iterate " + std::to_string(k));
      }
    }

    Point xn(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) xn[i] = x[i] - tk * gt[i];
    rec.step_norm = distance(x, xn);
    rec.step_params["t"] = tk;
    rec.step_params["err_norm"] = err_norm;
    t.records.push_back(std::move(rec));
    x = xn;
  }
  detail::finalize(t, p);
  return t;
}

}  // namespace plk

#endif  // PLK_ALGORITHMS_HPP
