#ifndef PLK_PROBLEMS_HPP
#define PLK_PROBLEMS_HPP

#include <algorithm>
#include <functional>
#include <limits>
#include <sstream>

#include "plk/core.hpp"

namespace plk {

enum class SubgradSetKind { singleton, interval_1d, polytope };

// Closed-form subdifferential at a point: a single vector, a 1-D interval of
// slopes, or the convex hull of a finite vertex list.
struct SubgradientSet {
  SubgradSetKind kind = SubgradSetKind::singleton;
  Point point;                   // singleton
  double lo = 0.0, hi = 0.0;     // interval_1d
  std::vector<Point> vertices;   // polytope

  static SubgradientSet singleton(Point v) {
    SubgradientSet s;
    s.kind = SubgradSetKind::singleton;
    s.point = std::move(v);
    return s;
  }
  static SubgradientSet interval(double lo, double hi) {
    if (lo > hi) throw std::invalid_argument("SubgradientSet: interval lo > hi");
    SubgradientSet s;
    s.kind = SubgradSetKind::interval_1d;
    s.lo = lo;
    s.hi = hi;
    return s;
  }
  static SubgradientSet polytope(std::vector<Point> verts) {
    if (verts.empty()) throw std::invalid_argument("SubgradientSet: empty polytope");
    SubgradientSet s;
    s.kind = SubgradSetKind::polytope;
    s.vertices = std::move(verts);
    return s;
  }

  // Nearest point of the set to `target` (Gilbert's scheme for polytopes with
  // more than two vertices; exact for the cases the built-ins produce).
  Point project(const Point& target) const {
    switch (kind) {
      case SubgradSetKind::singleton:
        return point;
      case SubgradSetKind::interval_1d: {
        double t = target.empty() ? 0.0 : target[0];
        return Point{std::clamp(t, lo, hi)};
      }
      case SubgradSetKind::polytope: {
        auto shifted = [&](const Point& v) {
          Point d(v.size());
          for (std::size_t i = 0; i < v.size(); ++i) d[i] = v[i] - target[i];
          return d;
        };
        // current iterate in shifted coordinates (origin is the target)
        Point best = shifted(vertices[0]);
        for (const auto& v : vertices) {
          Point d = shifted(v);
          if (norm(d) < norm(best)) best = d;
        }
        for (int it = 0; it < 500; ++it) {
          // vertex most opposed to the current iterate
          const Point* wbest = nullptr;
          double ip_min = std::numeric_limits<double>::infinity();
          for (const auto& v : vertices) {
            Point d = shifted(v);
            double ip = 0.0;
            for (std::size_t i = 0; i < d.size(); ++i) ip += best[i] * d[i];
            if (ip < ip_min) {
              ip_min = ip;
              wbest = &v;
            }
          }
          Point w = shifted(*wbest);
          // exact line minimization of ||best + t (w - best)|| over t in [0,1]
          double num = 0.0, den = 0.0;
          for (std::size_t i = 0; i < w.size(); ++i) {
            const double d = w[i] - best[i];
            num += best[i] * d;
            den += d * d;
          }
          if (den <= 0.0) break;
          const double t = std::clamp(-num / den, 0.0, 1.0);
          if (t <= 0.0) break;
          for (std::size_t i = 0; i < best.size(); ++i) best[i] += t * (w[i] - best[i]);
        }
        Point out(best.size());
        for (std::size_t i = 0; i < best.size(); ++i) out[i] = best[i] + target[i];
        return out;
      }
    }
    return point;
  }

  // Minimum-norm element of the set.
  Point min_norm_element() const {
    Point origin;
    switch (kind) {
      case SubgradSetKind::singleton: origin.assign(point.size(), 0.0); break;
      case SubgradSetKind::interval_1d: origin.assign(1, 0.0); break;
      case SubgradSetKind::polytope: origin.assign(vertices[0].size(), 0.0); break;
    }
    return project(origin);
  }

  double dist_to_origin() const { return norm(min_norm_element()); }
};

// DC decomposition phi = g - h with g differentiable and h convex.
struct DCParts {
  std::function<double(const Point&)> g_value;
  std::function<Point(const Point&)> g_grad;
  // Solves grad g(y) = u; the convex-subproblem solver used by DCA/BDCA.
  std::function<Point(const Point&)> g_grad_inverse;
  std::optional<double> g_lipschitz;  // Lipschitz modulus of grad g, when known
  std::function<double(const Point&)> h_value;
  std::function<SubgradientSet(const Point&)> h_subdiff;
  double rho = 0.0;  // common strong-convexity modulus of the pair (0 if none)
};

struct Problem {
  std::string id;
  int dim = 1;
  std::function<double(const Point&)> value_oracle;
  std::function<SubgradientSet(const Point&)> subgrad_set_oracle;
  std::function<Point(const Point&, double)> prox_oracle;
  std::optional<DCParts> dc;
  std::optional<Point> known_minimizer;
  std::optional<PLKProfile> known_plk;
};

inline void check_dim(const Problem& p, const Point& x) {
  if (static_cast<int>(x.size()) != p.dim) {
    std::ostringstream os;
    os << "problem '" << p.id << "': point has dimension " << x.size()
       << ", expected " << p.dim;
    throw std::invalid_argument(os.str());
  }
}

inline double evaluate(const Problem& p, const Point& x) {
  check_dim(p, x);
  return p.value_oracle(x);
}

inline SubgradientSet subgrad_set(const Problem& p, const Point& x) {
  check_dim(p, x);
  return p.subgrad_set_oracle(x);
}

inline double subgrad_dist(const Problem& p, const Point& x) {
  return subgrad_set(p, x).dist_to_origin();
}

inline Point prox_step(const Problem& p, const Point& x, double lambda) {
  check_dim(p, x);
  if (!(lambda > 0.0)) throw std::invalid_argument("prox_step: lambda must be positive");
  if (!p.prox_oracle) throw std::runtime_error("prox_step: problem '" + p.id + "' has no prox oracle");
  return p.prox_oracle(x, lambda);
}

inline const DCParts& dc_parts(const Problem& p) {
  if (!p.dc) throw std::runtime_error("problem '" + p.id + "' has no DC decomposition");
  return *p.dc;
}

namespace detail {

// Bisection for an increasing residual on [lo, hi], driven to the floating
// point fixpoint (bracket no longer splits).
template <typename F>
double bisect_increasing(F&& f, double lo, double hi) {
  double flo = f(lo);
  if (flo > 0.0) return lo;
  double fhi = f(hi);
  if (fhi < 0.0) return hi;
  for (int i = 0; i < 400; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double fm = f(mid);
    if (fm < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

inline double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

}  // namespace detail

// phi(x) = |x|^(1+alpha), 1-D. PLK exponent q = alpha / (1 + alpha).
inline Problem make_pow_abs(double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("make_pow_abs: alpha must be positive");
  Problem p;
  {
    std::ostringstream os;
    os << "pow_abs(" << alpha << ")";
    p.id = os.str();
  }
  p.dim = 1;
  p.value_oracle = [alpha](const Point& x) { return std::pow(std::fabs(x[0]), 1.0 + alpha); };
  auto grad = [alpha](double x) {
    return x == 0.0 ? 0.0 : (1.0 + alpha) * detail::sign(x) * std::pow(std::fabs(x), alpha);
  };
  p.subgrad_set_oracle = [grad](const Point& x) {
    return SubgradientSet::singleton(Point{grad(x[0])});
  };
  // minimizer u of |u|^(1+a) + (u-x)^2/(2 lambda): same sign as x and
  // |u| + (1+a) lambda |u|^a = |x|, monotone in |u|.
  p.prox_oracle = [alpha](const Point& x, double lambda) {
    const double s = std::fabs(x[0]);
    if (s == 0.0) return Point{0.0};
    auto resid = [&](double t) { return t + (1.0 + alpha) * lambda * std::pow(t, alpha) - s; };
    const double t = detail::bisect_increasing(resid, 0.0, s);
    return Point{detail::sign(x[0]) * t};
  };
  p.known_minimizer = Point{0.0};
  p.known_plk = PLKProfile(DesingularizingFunction(1.0, alpha / (1.0 + alpha)), 1e6, 1e6);
  p.dc = DCParts{
      p.value_oracle,
      [grad](const Point& x) { return Point{grad(x[0])}; },
      nullptr,
      alpha == 1.0 ? std::optional<double>(2.0) : std::nullopt,
      [](const Point&) { return 0.0; },
      [](const Point&) { return SubgradientSet::singleton(Point{0.0}); },
      0.0};
  return p;
}

// phi(x) = -x for x < 0, x^(3/2) for x >= 0. PLK exponent q = 1/3; the
// constant M = 3/2 is fitted so the inequality holds on both branches for
// gaps below eta = 1.
inline Problem make_piecewise_plus() {
  Problem p;
  p.id = "piecewise_plus";
  p.dim = 1;
  p.value_oracle = [](const Point& x) {
    return x[0] < 0.0 ? -x[0] : std::pow(x[0], 1.5);
  };
  p.subgrad_set_oracle = [](const Point& x) {
    if (x[0] < 0.0) return SubgradientSet::singleton(Point{-1.0});
    if (x[0] == 0.0) return SubgradientSet::interval(-1.0, 0.0);
    return SubgradientSet::singleton(Point{1.5 * std::sqrt(x[0])});
  };
  p.prox_oracle = [](const Point& x, double lambda) {
    const double v = x[0];
    if (v < -lambda) return Point{v + lambda};       // stays on the linear piece
    if (v <= 0.0) return Point{0.0};                 // -v/lambda lands in [0,1]
    // u > 0 solves u + 1.5 lambda sqrt(u) = v; quadratic in sqrt(u), stable form
    const double b = 1.5 * lambda;
    const double r = 2.0 * v / (b + std::sqrt(b * b + 4.0 * v));
    return Point{r * r};
  };
  p.known_minimizer = Point{0.0};
  p.known_plk = PLKProfile(DesingularizingFunction(1.5, 1.0 / 3.0), 1.0, 1.0);
  return p;
}

// phi(x) = c/2 ||x||^2 in dimension n. q = 1/2, M = sqrt(2/c).
inline Problem make_quadratic(double c, int n) {
  if (!(c > 0.0)) throw std::invalid_argument("make_quadratic: c must be positive");
  if (n < 1) throw std::invalid_argument("make_quadratic: dimension must be >= 1");
  Problem p;
  {
    std::ostringstream os;
    os << "quadratic(" << c << "," << n << ")";
    p.id = os.str();
  }
  p.dim = n;
  p.value_oracle = [c](const Point& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return 0.5 * c * s;
  };
  auto grad = [c](const Point& x) {
    Point g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = c * x[i];
    return g;
  };
  p.subgrad_set_oracle = [grad](const Point& x) { return SubgradientSet::singleton(grad(x)); };
  p.prox_oracle = [c](const Point& x, double lambda) {
    Point u(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) u[i] = x[i] / (1.0 + lambda * c);
    return u;
  };
  p.known_minimizer = Point(n, 0.0);
  p.known_plk = PLKProfile(DesingularizingFunction(std::sqrt(2.0 / c), 0.5), 1e6, 1e6);
  p.dc = DCParts{p.value_oracle,
                 grad,
                 [c](const Point& u) {
                   Point y(u.size());
                   for (std::size_t i = 0; i < u.size(); ++i) y[i] = u[i] / c;
                   return y;
                 },
                 c,
                 [](const Point&) { return 0.0; },
                 [n](const Point&) { return SubgradientSet::singleton(Point(n, 0.0)); },
                 0.0};
  return p;
}

// g = a_g/2 ||x||^2, h = a_h/2 ||x||^2 with a_g > a_h > 0; phi is the
// quadratic with coefficient a_g - a_h.
inline Problem make_dc_quadratic(double a_g, double a_h, int n) {
  if (!(a_g > a_h && a_h > 0.0))
    throw std::invalid_argument("make_dc_quadratic: requires a_g > a_h > 0");
  Problem p = make_quadratic(a_g - a_h, n);
  {
    std::ostringstream os;
    os << "dc_quadratic(" << a_g << "," << a_h << "," << n << ")";
    p.id = os.str();
  }
  p.dc = DCParts{[a_g](const Point& x) {
                   double s = 0.0;
                   for (double v : x) s += v * v;
                   return 0.5 * a_g * s;
                 },
                 [a_g](const Point& x) {
                   Point g(x.size());
                   for (std::size_t i = 0; i < x.size(); ++i) g[i] = a_g * x[i];
                   return g;
                 },
                 [a_g](const Point& u) {
                   Point y(u.size());
                   for (std::size_t i = 0; i < u.size(); ++i) y[i] = u[i] / a_g;
                   return y;
                 },
                 a_g,
                 [a_h](const Point& x) {
                   double s = 0.0;
                   for (double v : x) s += v * v;
                   return 0.5 * a_h * s;
                 },
                 [a_h](const Point& x) {
                   Point g(x.size());
                   for (std::size_t i = 0; i < x.size(); ++i) g[i] = a_h * x[i];
                   return SubgradientSet::singleton(g);
                 },
                 a_h};
  return p;
}

// g(x) = x^2 + rho/2 x^2, h(x) = c|x| + rho/2 x^2, so phi(x) = x^2 - c|x|.
// Global minima at +-c/2 with value -c^2/4; the limiting subdifferential at 0
// is the two-point set {-c, c}.
inline Problem make_dc_abs(double c, double rho) {
  if (!(c > 0.0)) throw std::invalid_argument("make_dc_abs: c must be positive");
  if (!(rho > 0.0)) throw std::invalid_argument("make_dc_abs: rho must be positive");
  Problem p;
  {
    std::ostringstream os;
    os << "dc_abs(" << c << "," << rho << ")";
    p.id = os.str();
  }
  p.dim = 1;
  p.value_oracle = [c](const Point& x) { return x[0] * x[0] - c * std::fabs(x[0]); };
  p.subgrad_set_oracle = [c](const Point& x) {
    if (x[0] != 0.0)
      return SubgradientSet::singleton(Point{2.0 * x[0] - c * detail::sign(x[0])});
    return SubgradientSet::polytope({Point{-c}, Point{c}});
  };
  // branch stationary points plus the kink; prox objective is piecewise
  // strongly convex so the minimizer is among these candidates
  p.prox_oracle = [c](const Point& x, double lambda) {
    const double v = x[0];
    auto obj = [&](double u) {
      return u * u - c * std::fabs(u) + (u - v) * (u - v) / (2.0 * lambda);
    };
    double best = 0.0, best_val = obj(0.0);
    const double up = (v + lambda * c) / (1.0 + 2.0 * lambda);
    if (up > 0.0 && obj(up) < best_val) { best = up; best_val = obj(up); }
    const double un = (v - lambda * c) / (1.0 + 2.0 * lambda);
    if (un < 0.0 && obj(un) < best_val) { best = un; best_val = obj(un); }
    return Point{best};
  };
  p.known_minimizer = Point{0.5 * c};
  p.known_plk = PLKProfile(DesingularizingFunction(1.0, 0.5), 0.25 * c * c, 0.5 * c);
  p.dc = DCParts{[rho](const Point& x) { return (1.0 + 0.5 * rho) * x[0] * x[0]; },
                 [rho](const Point& x) { return Point{(2.0 + rho) * x[0]}; },
                 [rho](const Point& u) { return Point{u[0] / (2.0 + rho)}; },
                 2.0 + rho,
                 [c, rho](const Point& x) {
                   return c * std::fabs(x[0]) + 0.5 * rho * x[0] * x[0];
                 },
                 [c, rho](const Point& x) {
                   if (x[0] != 0.0)
                     return SubgradientSet::singleton(
                         Point{c * detail::sign(x[0]) + rho * x[0]});
                   return SubgradientSet::interval(-c, c);
                 },
                 rho};
  return p;
}

}  // namespace plk

#endif  // PLK_PROBLEMS_HPP
