#ifndef PLK_RATES_HPP
#define PLK_RATES_HPP

#include "plk/monitors.hpp"

namespace plk {

enum class GapSource { value_gap, iterate_distance, synthetic };

struct GapSequence {
  std::vector<double> values;
  GapSource source = GapSource::synthetic;
};

inline GapSequence value_gap_sequence(const Trajectory& t) {
  return GapSequence{t.value_gaps(), GapSource::value_gap};
}

inline GapSequence iterate_distance_sequence(const Trajectory& t) {
  if (!t.reference_point)
    throw std::runtime_error("iterate_distance_sequence: trajectory has no reference point");
  GapSequence g;
  g.source = GapSource::iterate_distance;
  for (const auto& r : t.records) g.values.push_back(distance(r.x, *t.reference_point));
  return g;
}

enum class RateClass { finite_termination, superlinear, linear, sublinear };

inline std::string to_string(RateClass c) {
  switch (c) {
    case RateClass::finite_termination: return "finite_termination";
    case RateClass::superlinear: return "superlinear";
    case RateClass::linear: return "linear";
    case RateClass::sublinear: return "sublinear";
  }
  return "?";
}

struct EnvelopeResult {
  std::string check;        // which bound was evaluated
  double fitted_const = 0.0;
  double bound = 0.0;       // per-step bound for the linear case
  double observed = 0.0;
  double max_violation = 0.0;
  bool ok = false;
};

struct RateReport {
  RateClass classification = RateClass::sublinear;
  std::optional<std::size_t> finite_k0;
  std::optional<double> linear_factor;
  std::optional<double> sublinear_power;
  double tail_ratio_first = 0.0;
  double tail_ratio_last = 0.0;
  double fit_r2 = 0.0;
  std::vector<EnvelopeResult> envelope_checks;
};

struct LinFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::size_t n = 0;
};

inline LinFit linear_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw std::invalid_argument("linear_fit: need >= 2 matching samples");
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
    syy += ys[i] * ys[i];
  }
  LinFit f;
  f.n = xs.size();
  const double den = n * sxx - sx * sx;
  if (den == 0.0) throw std::invalid_argument("linear_fit: degenerate abscissae");
  f.slope = (n * sxy - sx * sy) / den;
  f.intercept = (sy - f.slope * sx) / n;
  double ss_res = 0.0, ss_tot = 0.0;
  const double ymean = sy / n;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double pred = f.intercept + f.slope * xs[i];
    ss_res += (ys[i] - pred) * (ys[i] - pred);
    ss_tot += (ys[i] - ymean) * (ys[i] - ymean);
  }
  f.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return f;
}

struct Lemma31Result {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

// sum_{j=k}^{k+l} (a_j - a_{j+1}) / a_j^q  <=  (a_k^{1-q} - a_{k+l+1}^{1-q}) / (1-q)
inline Lemma31Result lemma31_check(const GapSequence& a, double q, std::size_t k, std::size_t l) {
  if (!((q > 0.0 && q < 1.0) || (q > 1.0 && q < 2.0)))
    throw std::invalid_argument("lemma31_check: q must lie in (0,1) or (1,2)");
  if (k + l + 1 >= a.values.size())
    throw std::invalid_argument("lemma31_check: window exceeds sequence length");
  for (std::size_t j = k; j <= k + l + 1; ++j) {
    if (!(a.values[j] > 0.0))
      throw std::invalid_argument("lemma31_check: sequence must be positive on the window");
    if (j > k && a.values[j] > a.values[j - 1])
      throw std::invalid_argument("lemma31_check: sequence must be monotone decreasing");
  }
  Lemma31Result res;
  for (std::size_t j = k; j <= k + l; ++j)
    res.lhs += (a.values[j] - a.values[j + 1]) / std::pow(a.values[j], q);
  res.rhs = (std::pow(a.values[k], 1.0 - q) - std::pow(a.values[k + l + 1], 1.0 - q)) / (1.0 - q);
  res.holds = res.lhs <= res.rhs + 1e-12 * std::max(1.0, std::fabs(res.rhs));
  return res;
}

// Generates the equality recurrence a_{k+1} + sigma a_{k+1}^p = a_k by
// monotone root finding. Stops early once the next term underflows.
inline GapSequence lemma32_simulate(double a0, double sigma, double p, std::size_t n) {
  if (!(a0 > 0.0) || !(sigma > 0.0)) throw std::invalid_argument("lemma32_simulate: a0, sigma > 0");
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("lemma32_simulate: p must lie in (0,1)");
  GapSequence out;
  out.source = GapSource::synthetic;
  out.values.push_back(a0);
  double a = a0;
  for (std::size_t k = 0; k < n; ++k) {
    const double prev = a;
    a = detail::bisect_increasing(
        [&](double y) { return y + sigma * std::pow(y, p) - prev; }, 0.0, prev);
    if (!(a > 1e-280)) break;
    out.values.push_back(a);
  }
  return out;
}

// Tail-ratio classifier with fixed default thresholds (superlinear cutoff
// 0.05, linear stability band 0.05, sublinear fit R^2 >= 0.99).
inline RateReport classify_rate(const GapSequence& a, double tol_zero) {
  const auto& v = a.values;
  if (v.size() < 5) throw std::invalid_argument("classify_rate: need >= 5 entries");
  RateReport rep;

  for (std::size_t k = 0; k < v.size(); ++k) {
    if (v[k] <= tol_zero) {
      bool all_below = true;
      for (std::size_t j = k; j < v.size(); ++j)
        if (v[j] > tol_zero) all_below = false;
      if (all_below) {
        rep.classification = RateClass::finite_termination;
        rep.finite_k0 = k;
        return rep;
      }
    }
  }

  std::vector<double> ratios;
  for (std::size_t k = 0; k + 1 < v.size(); ++k) {
    if (!(v[k] > 0.0))
      throw std::runtime_error("classify_rate: nonpositive interior entry without terminal zero tail");
    ratios.push_back(v[k + 1] / v[k]);
  }
  const std::size_t m = ratios.size();
  const std::size_t q = std::max<std::size_t>(2, m / 4);
  std::vector<double> tail(ratios.end() - q, ratios.end());
  rep.tail_ratio_first = tail.front();
  rep.tail_ratio_last = tail.back();

  bool superlinear = tail.back() <= tail.front();
  for (double r : tail)
    if (r >= 0.05) superlinear = false;
  if (superlinear) {
    rep.classification = RateClass::superlinear;
    return rep;
  }

  double mean = 0.0;
  for (double r : tail) mean += r;
  mean /= static_cast<double>(tail.size());
  if (mean > 0.05 && mean < 0.98) {
    bool stable = true;
    for (double r : tail)
      if (std::fabs(r - mean) > 0.05) stable = false;
    // a tail drifting toward 1 is a sublinear sequence sampled too early, not
    // a linear one: demand the drift be small against the contraction margin
    if (std::fabs(tail.back() - tail.front()) > 0.1 * (1.0 - mean) + 1e-9) stable = false;
    if (stable) {
      rep.classification = RateClass::linear;
      rep.linear_factor = mean;
      return rep;
    }
  }

  if (tail.back() > 0.9) {
    // log a_k vs log k over the second half of the sequence
    std::vector<double> xs, ys;
    for (std::size_t k = v.size() / 2; k < v.size(); ++k) {
      if (!(v[k] > 0.0)) continue;
      xs.push_back(std::log(static_cast<double>(k)));
      ys.push_back(std::log(v[k]));
    }
    if (xs.size() >= 3) {
      const LinFit f = linear_fit(xs, ys);
      rep.fit_r2 = f.r2;
      if (f.slope < 0.0 && f.r2 >= 0.99) {
        rep.classification = RateClass::sublinear;
        rep.sublinear_power = -f.slope;
        return rep;
      }
    }
  }
  throw std::runtime_error("classify_rate: ambiguous tail (last ratios " +
                           std::to_string(tail.front()) + " .. " + std::to_string(tail.back()) + ")");
}

struct PLKFit {
  double q_hat = 0.0;
  double M_hat = 0.0;
  double b_hat = 0.0;
  double r2 = 0.0;
  std::size_t n_points = 0;
};

// log dist = q log gap + log b over the regression window; M recovered from
// b = 1 / (M (1 - q)).
inline PLKFit fit_plk_exponent(const std::vector<double>& gaps, const std::vector<double>& dists,
                               double window_lo = 1e-10, double window_hi = 1e-2,
                               std::size_t min_points = 6) {
  if (gaps.size() != dists.size())
    throw std::invalid_argument("fit_plk_exponent: mismatched samples");
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    if (gaps[i] >= window_lo && gaps[i] <= window_hi && dists[i] > 0.0) {
      xs.push_back(std::log(gaps[i]));
      ys.push_back(std::log(dists[i]));
    }
  }
  if (xs.size() < min_points)
    throw std::runtime_error("fit_plk_exponent: only " + std::to_string(xs.size()) +
                             " samples in the regression window, need " + std::to_string(min_points));
  const LinFit f = linear_fit(xs, ys);
  PLKFit fit;
  fit.q_hat = f.slope;
  fit.b_hat = std::exp(f.intercept);
  fit.M_hat = 1.0 / (fit.b_hat * (1.0 - fit.q_hat));
  fit.r2 = f.r2;
  fit.n_points = xs.size();
  return fit;
}

inline PLKFit estimate_plk_exponent(const Trajectory& t, const Problem& p,
                                    double window_lo = 1e-10, double window_hi = 1e-2,
                                    std::size_t min_points = 6) {
  std::vector<double> gaps, dists;
  for (const auto& r : t.records) {
    gaps.push_back(r.value - t.reference_value);
    dists.push_back(r.subgrad_dist ? *r.subgrad_dist : subgrad_dist(p, r.x));
  }
  return fit_plk_exponent(gaps, dists, window_lo, window_hi, min_points);
}

// Envelope checks per exponent regime. For q = 1/2 the per-step factor is
// 1/(1+alpha) with alpha = 4a/(b^2 M^2); the printed alternative 4a/(b^2 M)
// is reported alongside. For q in (1/2,1) the smallest dominating constants
// of the polynomial envelopes are fitted. For q < 1/2 the observed
// alternative (finite vs superlinear) is reported.
inline std::vector<EnvelopeResult> envelope_check(const Trajectory& t, const PLKProfile& profile,
                                                  const DescentCertificate& cert,
                                                  std::size_t tail_start = 2) {
  const double M = profile.desingularizer.M;
  const double q = profile.desingularizer.q;
  const double a = cert.a_max;
  const double b = cert.b_min_h2 ? *cert.b_min_h2 : (cert.b_min_h3 ? *cert.b_min_h3 : 0.0);
  if (!(a > 0.0) || !(b > 0.0))
    throw std::runtime_error("envelope_check: certificate constants a, b missing");
  std::vector<EnvelopeResult> out;
  const auto gaps = t.value_gaps();

  if (q == 0.5) {
    const double alpha = 4.0 * a / (b * b * M * M);
    EnvelopeResult r;
    r.check = "value_ratio_q_half";
    r.bound = 1.0 / (1.0 + alpha);
    r.observed = 0.0;
    for (std::size_t k = 0; k + 1 < gaps.size(); ++k) {
      if (gaps[k] <= kGapFloor) break;
      r.observed = std::max(r.observed, gaps[k + 1] / gaps[k]);
    }
    r.max_violation = r.observed - r.bound;
    r.ok = r.max_violation <= 1e-9;
    out.push_back(r);
    EnvelopeResult alt;
    alt.check = "value_ratio_q_half_alt_Mb2";  // the 4a/(b^2 M) variant, logged only
    alt.bound = 1.0 - 4.0 * a / (b * b * M);
    alt.ok = true;
    out.push_back(alt);
  } else if (q > 0.5) {
    const double expo = 1.0 / (2.0 * q - 1.0);
    EnvelopeResult r;
    r.check = "value_polynomial_envelope";
    for (std::size_t k = std::max<std::size_t>(tail_start, 1); k < gaps.size(); ++k) {
      if (gaps[k] <= kGapFloor) continue;
      r.fitted_const = std::max(r.fitted_const, gaps[k] * std::pow(static_cast<double>(k), expo));
    }
    r.max_violation = 0.0;
    for (std::size_t k = std::max<std::size_t>(tail_start, 1); k < gaps.size(); ++k) {
      if (gaps[k] <= kGapFloor) continue;
      const double env = r.fitted_const * std::pow(static_cast<double>(k), -expo);
      r.max_violation = std::max(r.max_violation, (gaps[k] - env) / std::max(env, 1e-300));
    }
    r.ok = r.max_violation <= 0.0;
    out.push_back(r);
    if (t.reference_point) {
      const double iexpo = (1.0 - q) / (2.0 * q - 1.0);
      EnvelopeResult ri;
      ri.check = "iterate_polynomial_envelope";
      for (std::size_t k = std::max<std::size_t>(tail_start, 1); k < t.size(); ++k) {
        const double d = distance(t.records[k].x, *t.reference_point);
        if (d <= 0.0) continue;
        ri.fitted_const = std::max(ri.fitted_const, d * std::pow(static_cast<double>(k), iexpo));
      }
      ri.ok = true;
      out.push_back(ri);
    }
  } else {
    EnvelopeResult r;
    r.check = "lower_exponent_alternative";
    const bool finite = t.termination == Termination::exact_stationary;
    r.fitted_const = finite ? 0.0 : 1.0;
    r.observed = finite ? 0.0 : 1.0;
    r.ok = true;
    r.check += finite ? ":finite" : ":superlinear";
    out.push_back(r);
  }
  return out;
}

struct InconsistencyProbe {
  double beta = 0.0;
  std::optional<std::size_t> first_violation;
  bool applicable = true;
};

// beta = a / ((1-q)^2 M^2 b^2); a gap with gap^(1-2q) < beta contradicts the
// coexistence of the q-PLK property with (H1), (H3) and nontrivial steps.
inline InconsistencyProbe inconsistency_probe(const std::vector<double>& gaps, double q, double a,
                                              std::optional<double> b, double M) {
  if (!(q > 0.0 && q < 0.5))
    throw std::invalid_argument("inconsistency_probe: q must lie in (0, 1/2)");
  InconsistencyProbe res;
  if (!b || !(*b > 0.0) || !(a > 0.0)) {
    res.applicable = false;
    return res;
  }
  res.beta = a / ((1.0 - q) * (1.0 - q) * M * M * *b * *b);
  for (std::size_t k = 0; k < gaps.size(); ++k) {
    if (!(gaps[k] > 0.0)) break;
    if (std::pow(gaps[k], 1.0 - 2.0 * q) < res.beta) {
      res.first_violation = k;
      break;
    }
  }
  return res;
}

inline InconsistencyProbe inconsistency_probe(const Trajectory& t, double q,
                                              const DescentCertificate& cert, double M) {
  return inconsistency_probe(t.value_gaps(), q, cert.a_max, cert.b_min_h3, M);
}

}  // namespace plk

#endif  // PLK_RATES_HPP
