#ifndef CUTLOCI_MODEL_SPACES_HPP
#define CUTLOCI_MODEL_SPACES_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <utility>
#include <variant>
#include <vector>

#include "cutloci/errors.hpp"
#include "cutloci/random.hpp"

namespace cutloci {

using Point = Eigen::VectorXd;

// Ambient geometries with closed-form geodesics: the round unit sphere S^n in
// R^{n+1} and the Euclidean plane.
struct RoundSphere {
  int dim = 2;  // n, so points live in R^{n+1}
};
struct EuclideanPlane {};

using ModelSpace = std::variant<RoundSphere, EuclideanPlane>;

inline int ambient_dimension(const ModelSpace& model) {
  if (const auto* sphere = std::get_if<RoundSphere>(&model)) return sphere->dim + 1;
  return 2;
}

inline void validate_point(const ModelSpace& model, const Point& p) {
  if (p.size() != ambient_dimension(model)) throw InvalidPointError("point dimension mismatch");
  if (std::holds_alternative<RoundSphere>(model) && std::abs(p.norm() - 1.0) > 1e-12)
    throw InvalidPointError("sphere point is not unit length");
}

// Unit-speed geodesic: great circle cos(t) p + sin(t) v, or straight line.
inline Point geodesic(const ModelSpace& model, const Point& p, const Point& v, double t) {
  validate_point(model, p);
  if (v.size() != p.size()) throw InvalidTangentError("tangent dimension mismatch");
  if (std::abs(v.norm() - 1.0) > 1e-10) throw InvalidTangentError("tangent is not unit length");
  if (std::holds_alternative<RoundSphere>(model)) {
    if (std::abs(p.dot(v)) > 1e-10) throw InvalidTangentError("tangent not orthogonal to base");
    return std::cos(t) * p + std::sin(t) * v;
  }
  return p + t * v;
}

inline double model_distance(const ModelSpace& model, const Point& x, const Point& y) {
  if (std::holds_alternative<RoundSphere>(model))
    return std::acos(std::clamp(x.dot(y), -1.0, 1.0));
  return (x - y).norm();
}

// ---------------------------------------------------------------------------
// Submanifolds.

// N = {p} on a sphere.
struct SpherePoint {
  Point p;
};

// The k-sphere spanned by the first k+1 coordinates inside S^n.
struct Equator {
  int n = 2;
  int k = 1;
};

// Two orthogonal great circles in S^3: the (x1,x2)-plane and (x3,x4)-plane circles.
struct LinkedCircles {};

// Ellipse x^2/a^2 + y^2/b^2 = 1 in the plane, a > b > 0.
struct Ellipse {
  double a = 2.0;
  double b = 1.0;
};

using Submanifold = std::variant<SpherePoint, Equator, LinkedCircles, Ellipse>;

inline void validate_submanifold(const Submanifold& sub) {
  if (const auto* eq = std::get_if<Equator>(&sub)) {
    if (eq->n < 1 || eq->k < 0 || eq->k > eq->n - 1)
      throw InvalidAxesError("equator requires 0 <= k <= n-1");
  } else if (const auto* el = std::get_if<Ellipse>(&sub)) {
    if (!(el->a > el->b && el->b > 0.0)) throw InvalidAxesError("ellipse requires a > b > 0");
  } else if (const auto* sp = std::get_if<SpherePoint>(&sub)) {
    if (std::abs(sp->p.norm() - 1.0) > 1e-12)
      throw InvalidPointError("sphere point is not unit length");
  }
}

// Parameter-space helpers for the ellipse.
inline Point ellipse_point(const Ellipse& el, double theta) {
  Point p(2);
  p << el.a * std::cos(theta), el.b * std::sin(theta);
  return p;
}

inline Point ellipse_inward_normal(const Ellipse& el, double theta) {
  Point n(2);
  n << -el.b * std::cos(theta), -el.a * std::sin(theta);
  n.normalize();
  return n;
}

inline ModelSpace ambient_space(const Submanifold& sub) {
  validate_submanifold(sub);
  if (const auto* sp = std::get_if<SpherePoint>(&sub))
    return RoundSphere{static_cast<int>(sp->p.size()) - 1};
  if (const auto* eq = std::get_if<Equator>(&sub)) return RoundSphere{eq->n};
  if (std::holds_alternative<LinkedCircles>(sub)) return RoundSphere{3};
  return EuclideanPlane{};
}

inline bool submanifold_contains(const Submanifold& sub, const Point& x, double tol = 1e-9) {
  if (const auto* sp = std::get_if<SpherePoint>(&sub)) return (x - sp->p).norm() <= tol;
  if (const auto* eq = std::get_if<Equator>(&sub)) {
    if (std::abs(x.norm() - 1.0) > tol) return false;
    return x.tail(eq->n - eq->k).norm() <= tol;
  }
  if (std::holds_alternative<LinkedCircles>(sub)) {
    if (std::abs(x.norm() - 1.0) > tol) return false;
    return x.tail(2).norm() <= tol || x.head(2).norm() <= tol;
  }
  const auto& el = std::get<Ellipse>(sub);
  double r = x(0) * x(0) / (el.a * el.a) + x(1) * x(1) / (el.b * el.b);
  return std::abs(r - 1.0) <= tol;
}

// Orthonormal tangent basis of the submanifold at one of its points.
inline std::vector<Point> tangent_basis(const Submanifold& sub, const Point& base) {
  if (std::holds_alternative<SpherePoint>(sub)) return {};
  if (const auto* eq = std::get_if<Equator>(&sub)) {
    // Complete base's leading block to an orthonormal basis of R^{k+1}; the
    // columns after the first span the tangent space of the k-sphere.
    int m = eq->k + 1;
    Eigen::MatrixXd col(m, 1);
    col.col(0) = base.head(m);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(col);
    Eigen::MatrixXd q = qr.householderQ();
    std::vector<Point> out;
    for (int j = 1; j < m; ++j) {
      Point t = Point::Zero(base.size());
      t.head(m) = q.col(j);
      out.push_back(t);
    }
    return out;
  }
  if (std::holds_alternative<LinkedCircles>(sub)) {
    Point t = Point::Zero(4);
    if (base.head(2).norm() > 0.5) {
      t(0) = -base(1);
      t(1) = base(0);
    } else {
      t(2) = -base(3);
      t(3) = base(2);
    }
    t.normalize();
    return {t};
  }
  const auto& el = std::get<Ellipse>(sub);
  double theta = std::atan2(base(1) / el.b, base(0) / el.a);
  Point t(2);
  t << -el.a * std::sin(theta), el.b * std::cos(theta);
  t.normalize();
  return {t};
}

// ---------------------------------------------------------------------------
// Foot points and distance.

struct FootPointResult {
  double distance = 0.0;
  std::vector<Point> feet;
  bool continuum = false;  // feet form a positive-dimensional family; a sample is reported
};

inline constexpr int kContinuumSampleCount = 8;

namespace detail {

inline Point embed_head(const Point& sub_point, int total_dim) {
  Point out = Point::Zero(total_dim);
  out.head(sub_point.size()) = sub_point;
  return out;
}

// All local minima of theta -> |x - (a cos, b sin)| located by a cyclic grid
// scan, each refined to machine precision by bisection with Newton steps on
// the derivative h(theta) = (p - x) . p'.
inline std::vector<double> ellipse_foot_angles(double a, double b, double x0, double y0) {
  constexpr int grid = 1024;
  static const std::array<std::array<double, grid>, 2> trig = [] {
    std::array<std::array<double, grid>, 2> t{};
    for (int i = 0; i < grid; ++i) {
      t[0][i] = std::cos(2.0 * M_PI * i / grid);
      t[1][i] = std::sin(2.0 * M_PI * i / grid);
    }
    return t;
  }();
  auto h = [&](double th) {
    double c = std::cos(th), s = std::sin(th);
    return (a * c - x0) * (-a * s) + (b * s - y0) * (b * c);
  };
  std::vector<double> vals(grid);
  for (int i = 0; i < grid; ++i) {
    double dx = a * trig[0][i] - x0, dy = b * trig[1][i] - y0;
    vals[i] = dx * dx + dy * dy;
  }
  std::vector<double> roots;
  for (int i = 0; i < grid; ++i) {
    double prev = vals[(i + grid - 1) % grid], next = vals[(i + 1) % grid];
    if (!(vals[i] <= prev && vals[i] <= next)) continue;
    double lo = 2.0 * M_PI * (i - 1) / grid, hi = 2.0 * M_PI * (i + 1) / grid;
    double hlo = h(lo);
    double th = 2.0 * M_PI * i / grid;
    for (int iter = 0; iter < 100 && hi - lo > 1e-15; ++iter) {
      double c = std::cos(th), s = std::sin(th);
      double hval = (a * c - x0) * (-a * s) + (b * s - y0) * (b * c);
      if ((hval < 0.0) == (hlo < 0.0)) {
        lo = th;
        hlo = hval;
      } else {
        hi = th;
      }
      double hslope = a * a * s * s + b * b * c * c - (a * c - x0) * a * c - (b * s - y0) * b * s;
      double newton = hslope != 0.0 ? th - hval / hslope : th;
      th = (newton > lo && newton < hi) ? newton : 0.5 * (lo + hi);
    }
    roots.push_back(th);
  }
  return roots;
}

inline void dedupe_feet(std::vector<Point>& feet, double resolution = 1e-9) {
  std::vector<Point> unique;
  for (const auto& f : feet) {
    bool seen = false;
    for (const auto& u : unique)
      if ((f - u).norm() <= resolution) {
        seen = true;
        break;
      }
    if (!seen) unique.push_back(f);
  }
  feet = std::move(unique);
}

}  // namespace detail

// Distance from x to the submanifold together with every foot realizing it
// (up to the equal-distance window); continuum families report a fixed sample.
inline FootPointResult dist_to_submanifold(const ModelSpace& model, const Submanifold& sub,
                                           const Point& x, double window = 1e-7) {
  validate_point(model, x);
  validate_submanifold(sub);
  FootPointResult out;

  if (const auto* sp = std::get_if<SpherePoint>(&sub)) {
    out.distance = std::acos(std::clamp(x.dot(sp->p), -1.0, 1.0));
    out.feet = {sp->p};
    return out;
  }

  if (const auto* eq = std::get_if<Equator>(&sub)) {
    int m = eq->k + 1;
    Point proj = x.head(m);
    double r = proj.norm();
    out.distance = std::acos(std::clamp(r, -1.0, 1.0));
    if (eq->k == 0) {
      // Zero-sphere: two candidate feet, keep those within the window.
      double d_plus = std::acos(std::clamp(x(0), -1.0, 1.0));
      double d_minus = std::acos(std::clamp(-x(0), -1.0, 1.0));
      out.distance = std::min(d_plus, d_minus);
      if (d_plus <= out.distance + window)
        out.feet.push_back(detail::embed_head(Point::Ones(1), x.size()));
      if (d_minus <= out.distance + window)
        out.feet.push_back(detail::embed_head(-Point::Ones(1), x.size()));
      return out;
    }
    if (r <= 0.5 * window) {
      // Every equator point is equidistant; report a circle of samples.
      out.continuum = true;
      for (int i = 0; i < kContinuumSampleCount; ++i) {
        double ang = 2.0 * M_PI * i / kContinuumSampleCount;
        Point f = Point::Zero(x.size());
        f(0) = std::cos(ang);
        f(1) = std::sin(ang);
        out.feet.push_back(f);
      }
      return out;
    }
    out.feet = {detail::embed_head(Point(proj / r), x.size())};
    return out;
  }

  if (std::holds_alternative<LinkedCircles>(sub)) {
    double r1 = x.head(2).norm();
    double r2 = x.tail(2).norm();
    double d1 = std::acos(std::clamp(r1, -1.0, 1.0));
    double d2 = std::acos(std::clamp(r2, -1.0, 1.0));
    out.distance = std::min(d1, d2);
    auto circle_feet = [&](int offset, double r, double d) {
      if (d > out.distance + window) return;
      if (r <= 0.5 * window) {
        out.continuum = true;
        for (int i = 0; i < kContinuumSampleCount; ++i) {
          double ang = 2.0 * M_PI * i / kContinuumSampleCount;
          Point f = Point::Zero(4);
          f(offset) = std::cos(ang);
          f(offset + 1) = std::sin(ang);
          out.feet.push_back(f);
        }
        return;
      }
      Point f = Point::Zero(4);
      f(offset) = x(offset) / r;
      f(offset + 1) = x(offset + 1) / r;
      out.feet.push_back(f);
    };
    circle_feet(0, r1, d1);
    circle_feet(2, r2, d2);
    return out;
  }

  const auto& el = std::get<Ellipse>(sub);
  auto angles = detail::ellipse_foot_angles(el.a, el.b, x(0), x(1));
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::pair<double, Point>> candidates;
  for (double th : angles) {
    Point f = ellipse_point(el, th);
    double d = (x - f).norm();
    best = std::min(best, d);
    candidates.emplace_back(d, f);
  }
  out.distance = best;
  for (auto& [d, f] : candidates)
    if (d <= best + window) out.feet.push_back(f);
  detail::dedupe_feet(out.feet);
  return out;
}

// ---------------------------------------------------------------------------
// Unit normals.

struct UnitNormal {
  Point base;
  Point dir;
};

// Validates orthogonality to the tangent space (and to the base on spheres).
inline UnitNormal make_unit_normal(const ModelSpace& model, const Submanifold& sub,
                                   const Point& base, const Point& dir) {
  validate_point(model, base);
  if (!submanifold_contains(sub, base, 1e-9))
    throw InvalidPointError("normal base point is not on the submanifold");
  if (std::abs(dir.norm() - 1.0) > 1e-12) throw InvalidTangentError("direction is not unit");
  if (std::holds_alternative<RoundSphere>(model) && std::abs(base.dot(dir)) > 1e-10)
    throw InvalidTangentError("direction is not tangent to the sphere");
  for (const auto& t : tangent_basis(sub, base))
    if (std::abs(dir.dot(t)) > 1e-10)
      throw InvalidTangentError("direction is not normal to the submanifold");
  return {base, dir};
}

// Draws a random unit normal; for the ellipse the inward orientation is used
// (outward rays never stop being minimal, so they carry no cut point).
inline UnitNormal sample_unit_normal(const ModelSpace& model, const Submanifold& sub, Rng& rng) {
  validate_submanifold(sub);
  if (const auto* sp = std::get_if<SpherePoint>(&sub)) {
    Point dir = random_unit_vector(static_cast<int>(sp->p.size()), rng);
    dir -= dir.dot(sp->p) * sp->p;
    dir.normalize();
    return make_unit_normal(model, sub, sp->p, dir);
  }
  if (const auto* eq = std::get_if<Equator>(&sub)) {
    int m = eq->k + 1;
    Point base = detail::embed_head(random_unit_vector(m, rng), eq->n + 1);
    Point dir = Point::Zero(eq->n + 1);
    dir.tail(eq->n - eq->k) = random_unit_vector(eq->n - eq->k, rng);
    return make_unit_normal(model, sub, base, dir);
  }
  if (std::holds_alternative<LinkedCircles>(sub)) {
    std::uniform_real_distribution<double> unif(0.0, 2.0 * M_PI);
    std::uniform_int_distribution<int> which(0, 1);
    double ang = unif(rng);
    double fib = unif(rng);
    Point base = Point::Zero(4), dir = Point::Zero(4);
    int offset = which(rng) == 0 ? 0 : 2;
    base(offset) = std::cos(ang);
    base(offset + 1) = std::sin(ang);
    dir((offset + 2) % 4) = std::cos(fib);
    dir((offset + 3) % 4) = std::sin(fib);
    return make_unit_normal(model, sub, base, dir);
  }
  const auto& el = std::get<Ellipse>(sub);
  std::uniform_real_distribution<double> unif(0.0, 2.0 * M_PI);
  double theta = unif(rng);
  return make_unit_normal(model, sub, ellipse_point(el, theta), ellipse_inward_normal(el, theta));
}

}  // namespace cutloci

#endif
