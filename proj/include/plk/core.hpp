#ifndef PLK_CORE_HPP
#define PLK_CORE_HPP

#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace plk {

using Point = std::vector<double>;

// Value gaps below this are treated as "at the reference value": the
// desingularizer derivative blows up as t -> 0 for q > 0 and doubles cannot
// resolve the window there.
inline constexpr double kGapFloor = 1e-14;

// Exact-termination thresholds shared by the algorithms and the reports.
inline constexpr double kExactStepTol = 1e-14;
inline constexpr double kExactDistTol = 1e-12;

inline bool is_finite(const Point& x) {
  for (double c : x)
    if (!std::isfinite(c)) return false;
  return true;
}

inline double norm(const Point& x) {
  double s = 0.0;
  for (double c : x) s += c * c;
  return std::sqrt(s);
}

inline double distance(const Point& x, const Point& y) {
  if (x.size() != y.size())
    throw std::invalid_argument("distance: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    s += d * d;
  }
  return std::sqrt(s);
}

// phi(t) = M * t^(1-q), the exponent family of desingularizing functions.
struct DesingularizingFunction {
  double M;
  double q;

  DesingularizingFunction(double M_, double q_) : M(M_), q(q_) {
    if (!(M > 0.0)) throw std::invalid_argument("DesingularizingFunction: M must be positive");
    if (!(q >= 0.0 && q < 1.0)) throw std::invalid_argument("DesingularizingFunction: q must lie in [0,1)");
  }
};

inline double desingularizing_value(const DesingularizingFunction& f, double t) {
  if (t < 0.0) throw std::domain_error("desingularizing_value: t must be nonnegative");
  if (t == 0.0) return 0.0;
  return f.M * std::pow(t, 1.0 - f.q);
}

inline double desingularizing_derivative(const DesingularizingFunction& f, double t) {
  if (!(t > 0.0)) throw std::domain_error("desingularizing_derivative: t must be positive");
  return f.M * (1.0 - f.q) * std::pow(t, -f.q);
}

enum class SubdiffKind { limiting, symmetric, clarke };

inline std::string to_string(SubdiffKind k) {
  switch (k) {
    case SubdiffKind::limiting: return "limiting";
    case SubdiffKind::symmetric: return "symmetric";
    case SubdiffKind::clarke: return "clarke";
  }
  return "limiting";
}

// The pair (M, q) together with the validity window (eta, radius) and the
// subdifferential the inequality is stated with.
struct PLKProfile {
  DesingularizingFunction desingularizer;
  double eta;
  double radius;
  SubdiffKind subdiff_kind;

  PLKProfile(DesingularizingFunction d, double eta_, double radius_,
             SubdiffKind kind = SubdiffKind::limiting)
      : desingularizer(d), eta(eta_), radius(radius_), subdiff_kind(kind) {
    if (!(eta > 0.0)) throw std::invalid_argument("PLKProfile: eta must be positive");
    if (!(radius > 0.0)) throw std::invalid_argument("PLKProfile: radius must be positive");
  }
};

// phi'(gap) * dist - 1. Nonnegative means the PLK inequality holds at the
// sampled point. The gap must lie inside the profile's value window.
inline double plk_residual(const PLKProfile& profile, double value_gap,
                           double subgrad_distance) {
  if (!(value_gap > 0.0) || !(value_gap < profile.eta))
    throw std::domain_error("plk_residual: value gap outside the PLK window (0, eta)");
  if (value_gap < kGapFloor)
    throw std::domain_error("plk_residual: value gap below resolvable floor");
  if (subgrad_distance < 0.0)
    throw std::domain_error("plk_residual: negative subgradient distance");
  return desingularizing_derivative(profile.desingularizer, value_gap) * subgrad_distance - 1.0;
}

enum class Termination { converged_step_tol, value_flat, max_iters, exact_stationary };

inline std::string to_string(Termination t) {
  switch (t) {
    case Termination::converged_step_tol: return "converged_step_tol";
    case Termination::value_flat: return "value_flat";
    case Termination::max_iters: return "max_iters";
    case Termination::exact_stationary: return "exact_stationary";
  }
  return "max_iters";
}

struct IterateRecord {
  std::size_t k = 0;
  Point x;
  double value = 0.0;
  // A subgradient of the objective at x, when the algorithm produced one.
  std::optional<Point> subgrad_witness;
  // dist(0, subdifferential at x), when the problem oracle supplies it.
  std::optional<double> subgrad_dist;
  // ||x^{k+1} - x^k||, set once the successor exists.
  std::optional<double> step_norm;
  std::map<std::string, double> step_params;
};

struct Trajectory {
  std::string problem_id;
  std::string algorithm_id;
  std::vector<IterateRecord> records;
  Termination termination = Termination::max_iters;
  std::optional<Point> reference_point;
  // Objective value at the reference point; gaps are measured against it.
  double reference_value = 0.0;

  std::size_t size() const { return records.size(); }

  double gap(std::size_t k) const { return records.at(k).value - reference_value; }

  std::vector<double> value_gaps() const {
    std::vector<double> g;
    g.reserve(records.size());
    for (const auto& r : records) g.push_back(r.value - reference_value);
    return g;
  }

  std::vector<double> step_norms() const {
    std::vector<double> s;
    for (const auto& r : records)
      if (r.step_norm) s.push_back(*r.step_norm);
    return s;
  }
};

}  // namespace plk

#endif  // PLK_CORE_HPP
