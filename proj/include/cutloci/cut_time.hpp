#ifndef CUTLOCI_CUT_TIME_HPP
#define CUTLOCI_CUT_TIME_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cutloci/errors.hpp"
#include "cutloci/model_spaces.hpp"
#include "cutloci/random.hpp"

namespace cutloci {

enum class CutCause { Focal, Equidistant, Both, BracketLimit };

inline const char* to_string(CutCause c) {
  switch (c) {
    case CutCause::Focal: return "Focal";
    case CutCause::Equidistant: return "Equidistant";
    case CutCause::Both: return "Both";
    default: return "BracketLimit";
  }
}

struct CutSample {
  UnitNormal normal;
  double s_value = 0.0;
  CutCause cause = CutCause::BracketLimit;
  Point cut_point;
  double bracket_width = 0.0;
};

inline double default_t_max(const ModelSpace& model, const Submanifold& sub) {
  if (std::holds_alternative<RoundSphere>(model)) return M_PI;
  const auto* el = std::get_if<Ellipse>(&sub);
  return el ? 10.0 * (el->a + el->b) : 10.0;
}

namespace detail {

// Endpoint of the geodesic leaving base with (not necessarily unit) velocity xi.
inline Point exp_vector(const ModelSpace& model, const Point& base, const Point& xi) {
  double len = xi.norm();
  if (len < 1e-300) return base;
  return geodesic(model, base, Point(xi / len), len);
}

// Orthonormal basis of the normal space at v.base orthogonal to v.dir
// (the directions in which the normal vector t*dir can rotate).
inline std::vector<Point> fiber_directions(const Submanifold& sub, const UnitNormal& v) {
  if (const auto* sp = std::get_if<SpherePoint>(&sub)) {
    // Normal space is the whole tangent plane of the sphere at p.
    int dim = static_cast<int>(sp->p.size());
    Eigen::MatrixXd cols(dim, 2);
    cols.col(0) = sp->p;
    cols.col(1) = v.dir;
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(cols);
    Eigen::MatrixXd q = qr.householderQ();
    std::vector<Point> out;
    for (int j = 2; j < dim; ++j) out.push_back(q.col(j));
    return out;
  }
  if (const auto* eq = std::get_if<Equator>(&sub)) {
    // Normal space is spanned by the trailing n-k coordinates.
    int codim = eq->n - eq->k;
    Eigen::MatrixXd col(codim, 1);
    col.col(0) = v.dir.tail(codim);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(col);
    Eigen::MatrixXd q = qr.householderQ();
    std::vector<Point> out;
    for (int j = 1; j < codim; ++j) {
      Point f = Point::Zero(eq->n + 1);
      f.tail(codim) = q.col(j);
      out.push_back(f);
    }
    return out;
  }
  if (std::holds_alternative<LinkedCircles>(sub)) {
    int offset = v.base.head(2).norm() > 0.5 ? 2 : 0;
    Point f = Point::Zero(4);
    f(offset) = -v.dir(offset + 1);
    f(offset + 1) = v.dir(offset);
    return {f};
  }
  return {};  // ellipse: codimension 1
}

// Per-normal data reused across every Jacobian evaluation of a focal scan.
struct FocalChart {
  std::vector<Point> tangents;
  std::vector<Point> fibers;
  double ellipse_theta = 0.0;
  double ellipse_sign = 1.0;

  FocalChart(const Submanifold& sub, const UnitNormal& v)
      : tangents(tangent_basis(sub, v.base)), fibers(fiber_directions(sub, v)) {
    if (const auto* el = std::get_if<Ellipse>(&sub)) {
      ellipse_theta = std::atan2(v.base(1) / el->b, v.base(0) / el->a);
      ellipse_sign = v.dir.dot(ellipse_inward_normal(*el, ellipse_theta)) >= 0.0 ? 1.0 : -1.0;
    }
  }

  // Curve u -> (base(u), unit normal field nu(u)) through v along the i-th
  // tangent direction of the submanifold.
  std::pair<Point, Point> base_normal_curve(const Submanifold& sub, const UnitNormal& v, int i,
                                            double u) const {
    if (const auto* el = std::get_if<Ellipse>(&sub))
      return {ellipse_point(*el, ellipse_theta + u),
              Point(ellipse_sign * ellipse_inward_normal(*el, ellipse_theta + u))};
    Point b = std::cos(u) * v.base + std::sin(u) * tangents[i];
    return {b, v.dir};  // coordinate normal frames are constant along equators and circles
  }
};

// Finite-difference Jacobian of the normal exponential in bundle coordinates
// (base parameters, normal fiber rotations, radius) at radius t.
inline Eigen::MatrixXd normal_exp_jacobian(const ModelSpace& model, const Submanifold& sub,
                                           const UnitNormal& v, const FocalChart& chart, double t,
                                           double step = 1e-5) {
  int amb = ambient_dimension(model);
  int nb = static_cast<int>(chart.tangents.size());
  if (std::holds_alternative<Ellipse>(sub)) nb = 1;
  Eigen::MatrixXd jac(amb, nb + static_cast<int>(chart.fibers.size()) + 1);
  int col = 0;
  for (int i = 0; i < nb; ++i) {
    auto [bp, np] = chart.base_normal_curve(sub, v, i, step);
    auto [bm, nm] = chart.base_normal_curve(sub, v, i, -step);
    jac.col(col++) = (geodesic(model, bp, np, t) - geodesic(model, bm, nm, t)) / (2.0 * step);
  }
  for (const auto& f : chart.fibers) {
    Point xi = t * v.dir;
    jac.col(col++) = (exp_vector(model, v.base, Point(xi + step * f)) -
                      exp_vector(model, v.base, Point(xi - step * f))) /
                     (2.0 * step);
  }
  if (std::holds_alternative<RoundSphere>(model))
    jac.col(col) = -std::sin(t) * v.base + std::cos(t) * v.dir;
  else
    jac.col(col) = v.dir;
  return jac;
}

inline double jacobian_ratio(const ModelSpace& model, const Submanifold& sub, const UnitNormal& v,
                             const FocalChart& chart, double t) {
  Eigen::MatrixXd jac = normal_exp_jacobian(model, sub, v, chart, t);
  int cols = static_cast<int>(jac.cols());
  if (cols == 2) {
    Eigen::Matrix2d gram = jac.transpose() * jac;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig;
    eig.computeDirect(gram, Eigen::EigenvaluesOnly);
    double lmax = eig.eigenvalues()(1);
    return lmax > 0.0 ? std::sqrt(std::max(0.0, eig.eigenvalues()(0)) / lmax) : 0.0;
  }
  if (cols == 3) {
    Eigen::Matrix3d gram = jac.transpose() * jac;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig;
    eig.computeDirect(gram, Eigen::EigenvaluesOnly);
    double lmax = eig.eigenvalues()(2);
    return lmax > 0.0 ? std::sqrt(std::max(0.0, eig.eigenvalues()(0)) / lmax) : 0.0;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac);
  const auto& s = svd.singularValues();
  double smax = s(0);
  return smax > 0.0 ? s(s.size() - 1) / smax : 0.0;
}

inline double golden_minimize(const std::function<double(double)>& f, double lo, double hi,
                              double width) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > width) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }
  return f(a) < f(b) ? a : b;
}

inline int cluster_count(const std::vector<Point>& pts, double resolution) {
  std::vector<Point> reps;
  for (const auto& p : pts) {
    bool seen = false;
    for (const auto& r : reps)
      if ((p - r).norm() <= resolution) {
        seen = true;
        break;
      }
    if (!seen) reps.push_back(p);
  }
  return static_cast<int>(reps.size());
}

}  // namespace detail

// First radius at which the bundle-coordinate Jacobian of the normal
// exponential loses rank (smallest singular value below tol times the
// largest), or nothing if no rank drop occurs in the bracket.
inline std::optional<double> focal_time(const ModelSpace& model, const Submanifold& sub,
                                        const UnitNormal& v, double tol = 1e-5,
                                        std::optional<double> t_max = std::nullopt) {
  double tmax = t_max.value_or(default_t_max(model, sub));
  constexpr int grid = 800;
  detail::FocalChart chart(sub, v);
  auto ratio = [&](double t) { return detail::jacobian_ratio(model, sub, v, chart, t); };
  std::vector<double> vals(grid);
  std::vector<double> ts(grid);
  for (int i = 0; i < grid; ++i) {
    ts[i] = tmax * (i + 1) / grid;
    vals[i] = ratio(ts[i]);
  }
  for (int i = 0; i < grid; ++i) {
    bool local_min = (i == 0 || vals[i] <= vals[i - 1]) && (i == grid - 1 || vals[i] <= vals[i + 1]);
    if (!local_min || vals[i] >= 0.2) continue;
    double lo = i == 0 ? 0.5 * ts[0] : ts[i - 1];
    double hi = i == grid - 1 ? tmax : ts[i + 1];
    double t = detail::golden_minimize(ratio, lo, hi, 1e-10);
    if (ratio(t) < tol) return t;
  }
  return std::nullopt;
}

// Cut time along the normal geodesic of v: bisection on the minimality
// predicate d(N, gamma(t)) >= t - tol, then clipped by the first focal time
// (the true cut time never exceeds it, while at focal-type breakdowns the
// predicate loses t only quadratically and bisection alone lands late).
inline CutSample s_function(const ModelSpace& model, const Submanifold& sub, const UnitNormal& v,
                            double tol = 1e-8, std::optional<double> t_max = std::nullopt) {
  if (tol <= 0.0) throw Error("tolerance must be positive");
  make_unit_normal(model, sub, v.base, v.dir);
  double tmax = t_max.value_or(default_t_max(model, sub));
  auto minimal = [&](double t) {
    return dist_to_submanifold(model, sub, geodesic(model, v.base, v.dir, t)).distance >= t - tol;
  };
  CutSample out;
  out.normal = v;
  if (minimal(tmax)) {
    if (std::holds_alternative<EuclideanPlane>(model))
      throw BracketTooSmallError("geodesic still minimal at t_max; cut point beyond bracket");
    out.s_value = tmax;
    out.bracket_width = 0.0;
  } else {
    double lo = 0.0, hi = tmax;
    while (hi - lo > 1e-11) {
      double mid = 0.5 * (lo + hi);
      (minimal(mid) ? lo : hi) = mid;
    }
    out.s_value = lo;
    out.bracket_width = hi - lo;
  }
  auto tf = focal_time(model, sub, v, 1e-5, tmax);
  if (tf && *tf < out.s_value) out.s_value = *tf;
  out.cut_point = geodesic(model, v.base, v.dir, out.s_value);

  bool is_focal = tf && std::abs(out.s_value - *tf) <= 10.0 * tol;
  auto foot = dist_to_submanifold(model, sub, out.cut_point, 10.0 * tol);
  double eps_feet = std::max(1e-6, 10.0 * std::sqrt(tol));
  bool is_equidistant = foot.continuum || detail::cluster_count(foot.feet, eps_feet) >= 2;
  if (is_focal && is_equidistant)
    out.cause = CutCause::Both;
  else if (is_focal)
    out.cause = CutCause::Focal;
  else if (is_equidistant)
    out.cause = CutCause::Equidistant;
  else
    out.cause = CutCause::BracketLimit;
  return out;
}

// Normal exponential with each ray rescaled by its cut time, so radius 1
// lands exactly on the cut locus.
inline Point rescaled_exponential(const ModelSpace& model, const Submanifold& sub,
                                  const Point& base, const Point& dir, double r,
                                  double tol = 1e-8,
                                  std::optional<double> t_max = std::nullopt) {
  if (r < 0.0 || r > 1.0) throw Error("rescaled exponential radius must lie in [0, 1]");
  UnitNormal v = make_unit_normal(model, sub, base, dir);
  CutSample cs = s_function(model, sub, v, tol, t_max);
  return geodesic(model, base, dir, cs.s_value * r);
}

struct InjectivityReport {
  int samples = 0;
  int collisions = 0;
  double min_image_separation = 0.0;  // over pairs separated by > 1e-6 in bundle coordinates
};

// Samples the open disk bundle (r < 1 - 1e-3), maps through the rescaled
// exponential, and checks that distinct bundle points keep distinct images.
inline InjectivityReport injectivity_check(const ModelSpace& model, const Submanifold& sub,
                                           int samples, std::uint64_t seed, double tol = 1e-8) {
  if (samples < 2) throw Error("injectivity check needs at least two samples");
  Rng rng(seed);
  std::uniform_real_distribution<double> radius(0.0, 1.0 - 1e-3);
  int amb = ambient_dimension(model);
  Eigen::MatrixXd pre(2 * amb + 1, samples);
  Eigen::MatrixXd img(amb, samples);
  for (int i = 0; i < samples; ++i) {
    UnitNormal v = sample_unit_normal(model, sub, rng);
    double r = radius(rng);
    CutSample cs = s_function(model, sub, v, tol);
    pre.col(i) << v.base, v.dir, r;
    img.col(i) = geodesic(model, v.base, v.dir, cs.s_value * r);
  }
  InjectivityReport report;
  report.samples = samples;
  double best_chord_sq = std::numeric_limits<double>::infinity();
  int bi = 0, bj = 1;
  for (int i = 0; i < samples; ++i)
    for (int j = i + 1; j < samples; ++j) {
      if ((pre.col(i) - pre.col(j)).squaredNorm() <= 1e-12) continue;
      double chord_sq = (img.col(i) - img.col(j)).squaredNorm();
      if (chord_sq < 1e-24) ++report.collisions;
      if (chord_sq < best_chord_sq) {
        best_chord_sq = chord_sq;
        bi = i;
        bj = j;
      }
    }
  report.min_image_separation = model_distance(model, img.col(bi), img.col(bj));
  return report;
}

// Endpoints of the ellipse's cut segment on the major axis.
inline std::pair<Point, Point> ellipse_cut_segment(double a, double b) {
  if (!(a > b && b > 0.0)) throw InvalidAxesError("ellipse requires a > b > 0");
  double c = (a * a - b * b) / a;
  Point left(2), right(2);
  left << -c, 0.0;
  right << c, 0.0;
  return {left, right};
}

struct DirectionalExpansion {
  double left_slope = 0.0;
  double right_slope = 0.0;
  double left_quadratic = 0.0;
  double right_quadratic = 0.0;
};

namespace detail {

// Richardson extrapolation for sequences with error c1*h + c2*h^2 + ... on a
// halving step sequence.
inline double richardson(std::vector<double> seq) {
  int n = static_cast<int>(seq.size());
  for (int level = 1; level < n; ++level) {
    double factor = std::pow(2.0, level);
    for (int i = n - 1; i >= level; --i)
      seq[i] = (factor * seq[i] - seq[i - 1]) / (factor - 1.0);
  }
  return seq[n - 1];
}

}  // namespace detail

// One-sided first and second derivatives of eps -> d^2(N, base + eps*(alpha,
// beta)) by Richardson-extrapolated secants.
inline DirectionalExpansion ellipse_dsq_directional(double a, double b, double alpha, double beta,
                                                    const Point& base,
                                                    std::vector<double> eps_sequence = {}) {
  if (!(a > b && b > 0.0)) throw InvalidAxesError("ellipse requires a > b > 0");
  if (alpha == 0.0 && beta == 0.0) throw Error("direction must be nonzero");
  if (eps_sequence.empty())
    for (int i = 0; i < 6; ++i) eps_sequence.push_back(1e-2 / (1 << i));
  std::sort(eps_sequence.begin(), eps_sequence.end(), std::greater<double>());
  ModelSpace model = EuclideanPlane{};
  Submanifold sub = Ellipse{a, b};
  Point u(2);
  u << alpha, beta;
  auto g = [&](double h) {
    double d = dist_to_submanifold(model, sub, Point(base + h * u)).distance;
    return d * d;
  };
  double g0 = g(0.0);
  DirectionalExpansion out;
  for (double side : {1.0, -1.0}) {
    std::vector<double> secants, gvals;
    for (double eps : eps_sequence) {
      gvals.push_back(g(side * eps));
      secants.push_back((gvals.back() - g0) / (side * eps));
    }
    double slope = detail::richardson(secants);
    std::vector<double> quads;
    for (std::size_t i = 0; i < eps_sequence.size(); ++i) {
      double eps = eps_sequence[i];
      quads.push_back((gvals[i] - g0 - slope * side * eps) / (eps * eps));
    }
    double quad = detail::richardson(quads);
    if (side > 0.0) {
      out.right_slope = slope;
      out.right_quadratic = quad;
    } else {
      out.left_slope = slope;
      out.left_quadratic = quad;
    }
  }
  return out;
}

// Number of distinct foot points of x, clustered at the given resolution.
inline int se_detect(const ModelSpace& model, const Submanifold& sub, const Point& x,
                     double tol = 1e-6) {
  auto res = dist_to_submanifold(model, sub, x, tol);
  return detail::cluster_count(res.feet, std::max(tol, 1e-9));
}

}  // namespace cutloci

#endif
