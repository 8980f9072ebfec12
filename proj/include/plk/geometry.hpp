#ifndef PLK_GEOMETRY_HPP
#define PLK_GEOMETRY_HPP

#include <random>

#include "plk/rates.hpp"

namespace plk {

namespace detail {

// Vertex list of the (finitely generated) subdifferential of h at x.
inline std::vector<Point> subdiff_vertices(const SubgradientSet& s) {
  switch (s.kind) {
    case SubgradSetKind::singleton: return {s.point};
    case SubgradSetKind::interval_1d: return {Point{s.lo}, Point{s.hi}};
    case SubgradSetKind::polytope: return s.vertices;
  }
  return {s.point};
}

inline bool lex_less(const Point& a, const Point& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

inline Point sub(const Point& a, const Point& b) {
  Point d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return d;
}

inline double dot(const Point& a, const Point& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace detail

struct Sigma1Result {
  double value = 0.0;
  Point v1;  // attaining vertex, ties broken toward the lexicographically smallest
};

// Largest distance from grad g(x) to a subgradient of h at x: the magnitude of
// the steepest locally decreasing DC direction.
inline Sigma1Result sigma1(const Problem& p, const Point& x) {
  const auto& dc = dc_parts(p);
  check_dim(p, x);
  const Point gx = dc.g_grad(x);
  const auto verts = detail::subdiff_vertices(dc.h_subdiff(x));
  Sigma1Result res;
  bool first = true;
  for (const auto& v : verts) {
    const double d = distance(gx, v);
    const bool better =
        first || d > res.value + 1e-12 ||
        (std::fabs(d - res.value) <= 1e-12 && detail::lex_less(v, res.v1));
    if (better) {
      res.value = std::max(d, first ? d : res.value);
      res.v1 = v;
      first = false;
    }
  }
  return res;
}

// Distance from grad g(x) to the subdifferential of h at x (a convex set), the
// magnitude of the slowest direction.
inline double sigma0(const Problem& p, const Point& x) {
  const auto& dc = dc_parts(p);
  check_dim(p, x);
  const Point gx = dc.g_grad(x);
  return distance(gx, dc.h_subdiff(x).project(gx));
}

// The probing direction d(x) = grad g(x) - v1(x).
inline Point steepest_dc_direction(const Problem& p, const Point& x) {
  const auto& dc = dc_parts(p);
  return detail::sub(dc.g_grad(x), sigma1(p, x).v1);
}

// |<d, v1> - min_v <d, v>| over the vertices: v1 must solve the linearized
// minimization exactly for the attaining vertex to be valid.
inline double vertex_optimality_gap(const Problem& p, const Point& x) {
  const auto& dc = dc_parts(p);
  const auto s1 = sigma1(p, x);
  const Point d = detail::sub(dc.g_grad(x), s1.v1);
  double vmin = std::numeric_limits<double>::infinity();
  for (const auto& v : detail::subdiff_vertices(dc.h_subdiff(x)))
    vmin = std::min(vmin, detail::dot(d, v));
  return std::fabs(detail::dot(d, s1.v1) - vmin);
}

struct LevelSamplerConfig {
  double max_radius = 1e6;   // outward scan cap; beyond it the level set is flagged unbounded
  int grid_points = 40;      // 1-D geometric grid resolution
  double depth = 1e-3;       // smallest relative offset of the grid
  int ball_samples = 200;    // n-D accepted sample target
  int path_checks = 16;      // polyline connectivity resolution
  std::uint64_t seed = 20240717;
};

struct LevelLipschitzResult {
  double L_hat = 0.0;
  bool unbounded_scan = false;  // 1-D scan hit max_radius without leaving the level set
  std::size_t pairs = 0;
};

namespace detail {

// 1-D connected level interval around x0: expand outward, then bisect the
// crossing of phi = phi(x0).
inline std::pair<double, double> level_interval_1d(const Problem& p, double x0, double cap,
                                                   bool& unbounded) {
  const double level = evaluate(p, Point{x0});
  auto inside = [&](double t) { return evaluate(p, Point{t}) <= level; };
  auto scan = [&](double dir) {
    double step = std::max(1e-6, 1e-3 * std::fabs(x0));
    double last_in = x0;
    while (step <= cap) {
      const double t = x0 + dir * step;
      if (!inside(t)) {
        // bisect the boundary between last_in and t
        double lo = last_in, hi = t;
        for (int i = 0; i < 200; ++i) {
          const double mid = 0.5 * (lo + hi);
          if (mid == lo || mid == hi) break;
          (inside(mid) ? lo : hi) = mid;
        }
        return lo;
      }
      last_in = t;
      step *= 2.0;
    }
    unbounded = true;
    return last_in;
  };
  return {scan(-1.0), scan(+1.0)};
}

}  // namespace detail

// Lower estimate of the Lipschitz modulus of grad g over the connected level
// component of x0, by maximizing the pair ratio ||grad g(x) - grad g(y)|| /
// ||x - y|| over a deterministic sample. The grid is pinned at the problem's
// known minimizer when it lies in the component: the ratio peaks there for
// non-Lipschitz gradients.
inline LevelLipschitzResult estimate_level_lipschitz(const Problem& p, const Point& x0,
                                                     const LevelSamplerConfig& cfg = {}) {
  const auto& dc = dc_parts(p);
  check_dim(p, x0);
  LevelLipschitzResult res;
  std::vector<Point> pts;

  if (p.dim == 1) {
    auto [lo, hi] = detail::level_interval_1d(p, x0[0], cfg.max_radius, res.unbounded_scan);
    pts.push_back(Point{lo});
    pts.push_back(Point{hi});
    pts.push_back(x0);
    double pin = 0.5 * (lo + hi);
    if (p.known_minimizer && (*p.known_minimizer)[0] >= lo && (*p.known_minimizer)[0] <= hi)
      pin = (*p.known_minimizer)[0];
    pts.push_back(Point{pin});
    // geometric offsets from the pin toward both ends, down to depth * span
    const int J = std::max(2, cfg.grid_points);
    for (int j = 0; j <= J; ++j) {
      const double scale = std::pow(cfg.depth, static_cast<double>(j) / J);
      pts.push_back(Point{pin + scale * (hi - pin)});
      pts.push_back(Point{pin + scale * (lo - pin)});
    }
  } else {
    // seeded ball sampling around x0, kept when inside the level set and
    // polyline-connected to x0
    const double level = evaluate(p, x0);
    const double radius = std::min(cfg.max_radius, 4.0 * norm(x0) + 1.0);
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    pts.push_back(x0);
    if (p.known_minimizer && evaluate(p, *p.known_minimizer) <= level)
      pts.push_back(*p.known_minimizer);
    int accepted = 0, attempts = 0;
    while (accepted < cfg.ball_samples && attempts < 100 * cfg.ball_samples) {
      ++attempts;
      Point dir(x0.size());
      for (auto& c : dir) c = gauss(rng);
      const double dn = norm(dir);
      if (dn == 0.0) continue;
      const double r = radius * std::pow(unif(rng), 1.0 / p.dim);
      Point cand(x0.size());
      for (std::size_t i = 0; i < cand.size(); ++i) cand[i] = x0[i] + r * dir[i] / dn;
      if (evaluate(p, cand) > level) continue;
      bool connected = true;
      for (int s = 1; s < cfg.path_checks && connected; ++s) {
        const double t = static_cast<double>(s) / cfg.path_checks;
        Point mid(x0.size());
        for (std::size_t i = 0; i < mid.size(); ++i) mid[i] = x0[i] + t * (cand[i] - x0[i]);
        if (evaluate(p, mid) > level + 1e-12 * std::max(1.0, std::fabs(level))) connected = false;
      }
      if (!connected) continue;
      pts.push_back(std::move(cand));
      ++accepted;
    }
  }

  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Point gi = dc.g_grad(pts[i]);
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double d = distance(pts[i], pts[j]);
      if (d <= 1e-300) continue;
      res.L_hat = std::max(res.L_hat, distance(gi, dc.g_grad(pts[j])) / d);
      ++res.pairs;
    }
  }
  return res;
}

struct DescentChainRow {
  double alpha;
  double lhs1;  // phi(x0) - phi(xbar)
  double lhs2;  // phi(x0) - phi(x0 - alpha d)
  double rhs;   // (1/2) alpha (2 - alpha L) sigma1^2
  bool holds;
};

// Chained decrease bound along the steepest DC direction: the gap to the
// minimizer dominates the single-step decrease, which dominates the quadratic
// model (1/2) alpha (2 - alpha L) sigma1^2, for alpha in [0, 1/L].
inline std::vector<DescentChainRow> verify_descent_chain(const Problem& p, const Point& x0,
                                                         const Point& xbar,
                                                         const std::vector<double>& alphas,
                                                         double L, double tol = 1e-9) {
  check_dim(p, x0);
  check_dim(p, xbar);
  if (!(L > 0.0)) throw std::invalid_argument("verify_descent_chain: L must be positive");
  const auto s1 = sigma1(p, x0);
  const Point d = steepest_dc_direction(p, x0);
  const double f0 = evaluate(p, x0);
  const double fbar = evaluate(p, xbar);
  std::vector<DescentChainRow> rows;
  for (double a : alphas) {
    Point xa(x0.size());
    for (std::size_t i = 0; i < x0.size(); ++i) xa[i] = x0[i] - a * d[i];
    DescentChainRow r;
    r.alpha = a;
    r.lhs1 = f0 - fbar;
    r.lhs2 = f0 - evaluate(p, xa);
    r.rhs = 0.5 * a * (2.0 - a * L) * s1.value * s1.value;
    r.holds = r.lhs1 >= r.lhs2 - tol && r.lhs2 >= r.rhs - tol;
    rows.push_back(r);
  }
  return rows;
}

struct GrowthProbeRow {
  double r;
  double sigma0;
  double sigma1;
  double L_hat;
  double lhs;  // M sigma1^(2q-1)
  double rhs;  // (2 L_hat)^q
  bool holds;
};

struct GrowthProbeResult {
  std::vector<GrowthProbeRow> rows;
  double slope_lhs = 0.0;   // log-log slope of lhs versus r
  double slope_rhs = 0.0;
  double slope_L = 0.0;     // log-log slope of L_hat versus r
  std::optional<double> first_failure_radius;
};

// Necessary-condition probe for the lower-exponent PLK property: at points
// xbar + r u the stationarity measure must satisfy M sigma1^(2q-1) <= (2 L)^q.
// A gradient with a global Lipschitz bound keeps the right side bounded while
// the left side blows up as r -> 0, exposing the failure.
inline GrowthProbeResult curvature_growth_probe(const Problem& p, const Point& xbar,
                                                const std::vector<double>& radii, double q,
                                                double M, const Point& direction = {},
                                                const LevelSamplerConfig& cfg = {}) {
  if (!(q > 0.0 && q < 0.5))
    throw std::invalid_argument("curvature_growth_probe: q must lie in (0, 1/2)");
  if (!(M > 0.0)) throw std::invalid_argument("curvature_growth_probe: M must be positive");
  check_dim(p, xbar);
  Point u = direction;
  if (u.empty()) {
    u.assign(xbar.size(), 0.0);
    u[0] = 1.0;
  }
  const double un = norm(u);
  if (!(un > 0.0)) throw std::invalid_argument("curvature_growth_probe: zero direction");

  GrowthProbeResult res;
  std::vector<double> lr, l_lhs, l_rhs, l_L;
  for (double r : radii) {
    if (!(r > 0.0)) throw std::invalid_argument("curvature_growth_probe: radii must be positive");
    Point x0(xbar.size());
    for (std::size_t i = 0; i < x0.size(); ++i) x0[i] = xbar[i] + r * u[i] / un;
    GrowthProbeRow row;
    row.r = r;
    row.sigma0 = sigma0(p, x0);
    row.sigma1 = sigma1(p, x0).value;
    row.L_hat = estimate_level_lipschitz(p, x0, cfg).L_hat;
    row.lhs = M * std::pow(row.sigma1, 2.0 * q - 1.0);
    row.rhs = std::pow(2.0 * row.L_hat, q);
    row.holds = row.lhs <= row.rhs * (1.0 + 1e-9);
    if (!row.holds && !res.first_failure_radius) res.first_failure_radius = r;
    res.rows.push_back(row);
    if (row.lhs > 0.0 && row.rhs > 0.0 && row.L_hat > 0.0) {
      lr.push_back(std::log(r));
      l_lhs.push_back(std::log(row.lhs));
      l_rhs.push_back(std::log(row.rhs));
      l_L.push_back(std::log(row.L_hat));
    }
  }
  if (lr.size() >= 2) {
    res.slope_lhs = linear_fit(lr, l_lhs).slope;
    res.slope_rhs = linear_fit(lr, l_rhs).slope;
    res.slope_L = linear_fit(lr, l_L).slope;
  }
  return res;
}

struct GeometryProbeResult {
  Point x0;
  double sigma0 = 0.0;
  double sigma1 = 0.0;
  Point v1;
  Point d;
  double L_hat = 0.0;
  bool L_unbounded_scan = false;
  std::vector<DescentChainRow> descent_chain;
  std::optional<GrowthProbeRow> bound_check;
};

// One-stop probe at x0: stationarity measures, Lipschitz estimate, descent
// chain on a uniform alpha grid in [0, 1/L_hat], and optionally the growth
// bound for a supplied exponent pair.
inline GeometryProbeResult geometry_probe(const Problem& p, const Point& x0,
                                          std::optional<std::pair<double, double>> qM = {},
                                          const LevelSamplerConfig& cfg = {}) {
  GeometryProbeResult res;
  res.x0 = x0;
  const auto s1 = sigma1(p, x0);
  res.sigma1 = s1.value;
  res.v1 = s1.v1;
  res.sigma0 = sigma0(p, x0);
  res.d = steepest_dc_direction(p, x0);
  const auto L = estimate_level_lipschitz(p, x0, cfg);
  res.L_hat = L.L_hat;
  res.L_unbounded_scan = L.unbounded_scan;
  if (p.known_minimizer && res.L_hat > 0.0) {
    std::vector<double> alphas;
    for (int i = 0; i <= 10; ++i) alphas.push_back(i / (10.0 * res.L_hat));
    res.descent_chain = verify_descent_chain(p, x0, *p.known_minimizer, alphas, res.L_hat);
  }
  if (qM) {
    GrowthProbeRow row;
    row.r = p.known_minimizer ? distance(x0, *p.known_minimizer) : 0.0;
    row.sigma0 = res.sigma0;
    row.sigma1 = res.sigma1;
    row.L_hat = res.L_hat;
    row.lhs = qM->second * std::pow(res.sigma1, 2.0 * qM->first - 1.0);
    row.rhs = std::pow(2.0 * res.L_hat, qM->first);
    row.holds = row.lhs <= row.rhs * (1.0 + 1e-9);
    res.bound_check = row;
  }
  return res;
}

}  // namespace plk

#endif  // PLK_GEOMETRY_HPP
