#ifndef PLK_MONITORS_HPP
#define PLK_MONITORS_HPP

#include "plk/problems.hpp"

namespace plk {

// Steps at or below this are excluded from ratio computations: terminal
// repeats would poison the extremal constants.
inline constexpr double kZeroStepTol = 1e-16;

struct IndexWindow {
  std::size_t begin = 0;                                        // burn-in prefix to drop
  std::size_t end = std::numeric_limits<std::size_t>::max();    // one past the last index
};

struct PerIterateMargin {
  std::size_t k;
  double h1_margin;  // (phi(x^k) - phi(x^{k+1})) / step^2
  double h2_ratio;   // ||w^{k+1}|| / step
  double h3_ratio;   // ||w^k|| / step
};

struct DescentCertificate {
  double a_max = 0.0;
  bool h1_failed = false;
  std::optional<double> b_min_h2;
  std::optional<double> b_min_h3;
  bool h4_ok = false;
  std::optional<double> sigma_primary;
  bool complementary_ok = false;
  std::vector<PerIterateMargin> per_k_margins;
  IndexWindow window;
  std::vector<std::string> violations;
  std::vector<std::size_t> zero_step_indices;
};

namespace detail {

inline std::size_t window_end(const Trajectory& t, const IndexWindow& w) {
  return std::min<std::size_t>(w.end, t.size());
}

}  // namespace detail

struct H1Result {
  double a_max = 0.0;
  bool failed = false;  // some value increased
  std::vector<std::pair<std::size_t, double>> margins;
};

// (H1): largest a with phi(x^{k+1}) + a step^2 <= phi(x^k) for every k in the
// window. Returns 0 with the failure flag when any value increases.
inline H1Result certify_h1(const Trajectory& t, const IndexWindow& w = {}) {
  if (t.size() < 2) throw std::invalid_argument("certify_h1: trajectory needs >= 2 records");
  H1Result res;
  res.a_max = std::numeric_limits<double>::infinity();
  bool any = false;
  const std::size_t end = detail::window_end(t, w);
  for (std::size_t k = w.begin; k + 1 < end; ++k) {
    const auto& r = t.records[k];
    if (!r.step_norm) continue;
    const double decrease = r.value - t.records[k + 1].value;
    if (decrease < 0.0) res.failed = true;
    if (*r.step_norm <= kZeroStepTol) continue;
    const double ratio = decrease / (*r.step_norm * *r.step_norm);
    res.margins.emplace_back(k, ratio);
    res.a_max = std::min(res.a_max, ratio);
    any = true;
  }
  if (res.failed || !any) res.a_max = 0.0;
  return res;
}

struct RelativeErrorResult {
  std::optional<double> b_min;  // absent when no nonzero step carried a witness
  std::vector<std::pair<std::size_t, double>> ratios;
  std::vector<std::size_t> flagged;  // zero step with nonzero subgradient
};

namespace detail {

inline double witness_norm_at(const Trajectory& t, const Problem* p, std::size_t k) {
  const auto& r = t.records[k];
  if (r.subgrad_witness) return norm(*r.subgrad_witness);
  if (r.subgrad_dist) return *r.subgrad_dist;
  if (p) return subgrad_dist(*p, r.x);
  throw std::runtime_error("relative-error certificate: no witness or oracle at index " +
                           std::to_string(k));
}

inline RelativeErrorResult certify_relative_error(const Trajectory& t, const Problem* p,
                                                  bool at_successor, const IndexWindow& w) {
  if (t.size() < 2)
    throw std::invalid_argument("relative-error certificate: trajectory needs >= 2 records");
  RelativeErrorResult res;
  double bmax = 0.0;
  bool any = false;
  const std::size_t end = window_end(t, w);
  for (std::size_t k = w.begin; k + 1 < end; ++k) {
    const auto& r = t.records[k];
    if (!r.step_norm) continue;
    const double wn = witness_norm_at(t, p, at_successor ? k + 1 : k);
    if (*r.step_norm <= kZeroStepTol) {
      if (wn > kZeroStepTol) res.flagged.push_back(k);
      continue;
    }
    const double ratio = wn / *r.step_norm;
    res.ratios.emplace_back(k, ratio);
    bmax = std::max(bmax, ratio);
    any = true;
  }
  if (any) res.b_min = bmax;
  return res;
}

}  // namespace detail

// (H2): smallest b with ||w^{k+1}|| <= b step_k, the witness taken at the
// successor iterate (stored, or the min-norm oracle value).
inline RelativeErrorResult certify_h2(const Trajectory& t, const Problem& p,
                                      const IndexWindow& w = {}) {
  return detail::certify_relative_error(t, &p, true, w);
}

inline RelativeErrorResult certify_h2(const Trajectory& t, const IndexWindow& w = {}) {
  return detail::certify_relative_error(t, nullptr, true, w);
}

// (H3): as (H2) but the witness lives at the current iterate.
inline RelativeErrorResult certify_h3(const Trajectory& t, const Problem& p,
                                      const IndexWindow& w = {}) {
  return detail::certify_relative_error(t, &p, false, w);
}

inline RelativeErrorResult certify_h3(const Trajectory& t, const IndexWindow& w = {}) {
  return detail::certify_relative_error(t, nullptr, false, w);
}

// (H4) finite-sample proxy: the trailing quarter of the iterates is Cauchy
// (max pairwise distance <= 10 step_tol) and its values stay within value_tol
// of the final value.
inline bool certify_h4(const Trajectory& t, double step_tol, double value_tol) {
  if (t.size() < 10) throw std::invalid_argument("certify_h4: trajectory needs >= 10 records");
  const std::size_t n = t.size();
  const std::size_t start = n - std::max<std::size_t>(2, n / 4);
  double max_dist = 0.0;
  for (std::size_t i = start; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      max_dist = std::max(max_dist, distance(t.records[i].x, t.records[j].x));
  if (max_dist > 10.0 * step_tol) return false;
  const double final_value = t.records.back().value;
  for (std::size_t i = start; i < n; ++i)
    if (std::fabs(t.records[i].value - final_value) > value_tol) return false;
  return true;
}

struct IRGDescentResult {
  std::optional<double> sigma;  // primary descent constant
  bool complementary_ok = true;
};

// Primary: phi(x^k) - phi(x^{k+1}) >= sigma ||grad|| step; complementary:
// equal values force a zero step.
inline IRGDescentResult certify_descent_conditions_irg(const Trajectory& t,
                                                       const IndexWindow& w = {}) {
  IRGDescentResult res;
  double sigma = std::numeric_limits<double>::infinity();
  bool any = false;
  const std::size_t end = detail::window_end(t, w);
  for (std::size_t k = w.begin; k + 1 < end; ++k) {
    const auto& r = t.records[k];
    if (!r.step_norm) continue;
    if (!r.subgrad_dist)
      throw std::runtime_error("certify_descent_conditions_irg: gradient norms missing");
    const double decrease = r.value - t.records[k + 1].value;
    if (std::fabs(decrease) <= 1e-14 && *r.step_norm > 1e-14) res.complementary_ok = false;
    if (*r.step_norm <= kZeroStepTol || *r.subgrad_dist <= kZeroStepTol) continue;
    sigma = std::min(sigma, decrease / (*r.subgrad_dist * *r.step_norm));
    any = true;
  }
  if (any) res.sigma = sigma;
  return res;
}

struct SummabilityResult {
  double partial_sum = 0.0;
  bool tail_bound_ok = false;
};

// Finite-sample proxy for step summability: the last quarter of the step sums
// must be at most half the previous quarter.
inline SummabilityResult check_summability(const Trajectory& t) {
  if (t.size() < 10)
    throw std::invalid_argument("check_summability: trajectory needs >= 10 records");
  const auto steps = t.step_norms();
  SummabilityResult res;
  for (double s : steps) res.partial_sum += s;
  const std::size_t m = steps.size();
  const std::size_t q = std::max<std::size_t>(1, m / 4);
  double last = 0.0, prev = 0.0;
  for (std::size_t i = m - q; i < m; ++i) last += steps[i];
  for (std::size_t i = m - 2 * q; i < m - q; ++i) prev += steps[i];
  res.tail_bound_ok = last <= 0.5 * prev || last == 0.0;
  return res;
}

// Full certificate over one trajectory; the oracle-backed H2/H3 variants are
// used when the problem is supplied.
inline DescentCertificate certify(const Trajectory& t, const Problem* p = nullptr,
                                  const IndexWindow& w = {}, double step_tol = 1e-10,
                                  double value_tol = 1e-10) {
  DescentCertificate cert;
  cert.window = w;
  auto h1 = certify_h1(t, w);
  cert.a_max = h1.a_max;
  cert.h1_failed = h1.failed;
  if (h1.failed) cert.violations.push_back("h1: objective value increased");
  auto h2 = detail::certify_relative_error(t, p, true, w);
  auto h3 = detail::certify_relative_error(t, p, false, w);
  cert.b_min_h2 = h2.b_min;
  cert.b_min_h3 = h3.b_min;
  for (std::size_t k : h2.flagged) {
    cert.zero_step_indices.push_back(k);
    cert.violations.push_back("h2: zero step with nonzero successor subgradient at k=" +
                              std::to_string(k));
  }
  if (t.size() >= 10) cert.h4_ok = certify_h4(t, step_tol, value_tol);
  bool have_grads = true;
  for (const auto& r : t.records)
    if (!r.subgrad_dist) have_grads = false;
  if (have_grads) {
    auto irg = certify_descent_conditions_irg(t, w);
    cert.sigma_primary = irg.sigma;
    cert.complementary_ok = irg.complementary_ok;
  }
  // joined per-k table for the indices every ratio covers
  const std::size_t end = detail::window_end(t, w);
  for (std::size_t k = w.begin; k + 1 < end; ++k) {
    const auto& r = t.records[k];
    if (!r.step_norm || *r.step_norm <= kZeroStepTol) continue;
    PerIterateMargin m;
    m.k = k;
    m.h1_margin = (r.value - t.records[k + 1].value) / (*r.step_norm * *r.step_norm);
    m.h2_ratio = detail::witness_norm_at(t, p, k + 1) / *r.step_norm;
    m.h3_ratio = detail::witness_norm_at(t, p, k) / *r.step_norm;
    cert.per_k_margins.push_back(m);
  }
  return cert;
}

}  // namespace plk

#endif  // PLK_MONITORS_HPP
