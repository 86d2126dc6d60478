#ifndef CUTLOCI_GRADIENT_FLOW_HPP
#define CUTLOCI_GRADIENT_FLOW_HPP

#include <cmath>
#include <variant>
#include <vector>

#include "cutloci/cut_time.hpp"
#include "cutloci/errors.hpp"
#include "cutloci/model_spaces.hpp"

namespace cutloci {

struct Trajectory {
  std::vector<double> times;
  std::vector<Point> points;
};

namespace detail {

struct FootRay {
  Point foot;
  Point dir_at_foot;  // unit tangent at the foot pointing toward the query
  double distance = 0.0;
};

// The unique minimal geodesic data from N to q; errors if q sits on N or on
// the separating set (no well-defined gradient there).
inline FootRay unique_foot_ray(const ModelSpace& model, const Submanifold& sub, const Point& q) {
  auto res = dist_to_submanifold(model, sub, q);
  if (res.distance < 1e-10) throw OnSubmanifoldError("query point lies on the submanifold");
  if (res.continuum || cluster_count(res.feet, 1e-6) >= 2)
    throw OnCutLocusError("query point has multiple foot points");
  FootRay ray;
  ray.foot = res.feet[0];
  ray.distance = res.distance;
  if (std::holds_alternative<RoundSphere>(model)) {
    double d = res.distance;
    ray.dir_at_foot = (q - std::cos(d) * ray.foot) / std::sin(d);
  } else {
    ray.dir_at_foot = (q - ray.foot) / res.distance;
  }
  ray.dir_at_foot.normalize();
  return ray;
}

}  // namespace detail

// Gradient of f = d(N, .)^2 at q: twice the distance times the unit velocity
// of the minimal geodesic where it reaches q.
inline Point grad_dist_sq_geom(const ModelSpace& model, const Submanifold& sub, const Point& q) {
  auto ray = detail::unique_foot_ray(model, sub, q);
  double d = ray.distance;
  if (std::holds_alternative<RoundSphere>(model)) {
    Point velocity = -std::sin(d) * ray.foot + std::cos(d) * ray.dir_at_foot;
    return 2.0 * d * velocity;
  }
  return 2.0 * d * ray.dir_at_foot;
}

// Negative gradient flow of f in closed form: slide along the minimal
// geodesic to arclength d(q) e^{-2t}.
inline Point flow_to_submanifold(const ModelSpace& model, const Submanifold& sub, const Point& q,
                                 double t) {
  if (t < 0.0) throw Error("flow time must be nonnegative");
  auto ray = detail::unique_foot_ray(model, sub, q);
  return geodesic(model, ray.foot, ray.dir_at_foot, ray.distance * std::exp(-2.0 * t));
}

// Defect of the flow ODE at time t, by central differences in t.
inline double flow_ode_residual_geom(const ModelSpace& model, const Submanifold& sub,
                                     const Point& q, double t, double step = 1e-5) {
  if (t < step) throw Error("time must be at least the finite-difference step");
  Point forward = flow_to_submanifold(model, sub, q, t + step);
  Point backward = flow_to_submanifold(model, sub, q, t - step);
  Point deriv = (forward - backward) / (2.0 * step);
  Point grad = grad_dist_sq_geom(model, sub, flow_to_submanifold(model, sub, q, t));
  return (deriv + grad).norm();
}

// Deformation of M - N onto the cut locus: moves q outward along its normal
// geodesic from radius d(q) to the cut time, linearly in t. Points with
// multiple feet already lie on the cut locus and stay fixed.
inline Point deform_to_cut_locus(const ModelSpace& model, const Submanifold& sub, const Point& q,
                                 double t, double tol = 1e-8) {
  if (t < 0.0 || t > 1.0) throw Error("deformation parameter must lie in [0, 1]");
  auto res = dist_to_submanifold(model, sub, q);
  if (res.distance < 1e-10) throw OnSubmanifoldError("deformation undefined on the submanifold");
  if (res.continuum || detail::cluster_count(res.feet, 1e-6) >= 2) return q;
  auto ray = detail::unique_foot_ray(model, sub, q);
  UnitNormal v = make_unit_normal(model, sub, ray.foot, ray.dir_at_foot);
  CutSample cs = s_function(model, sub, v, tol);
  return geodesic(model, ray.foot, ray.dir_at_foot,
                  t * cs.s_value + (1.0 - t) * ray.distance);
}

enum class FlowKind { ToSubmanifold, ToCutLocus };

inline Trajectory sample_trajectory(const ModelSpace& model, const Submanifold& sub,
                                    const Point& q, const std::vector<double>& t_grid,
                                    FlowKind kind = FlowKind::ToSubmanifold) {
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] > t_grid[i - 1])) throw Error("time grid must be strictly increasing");
  Trajectory traj;
  traj.times = t_grid;
  traj.points.reserve(t_grid.size());
  for (double t : t_grid)
    traj.points.push_back(kind == FlowKind::ToSubmanifold
                              ? flow_to_submanifold(model, sub, q, t)
                              : deform_to_cut_locus(model, sub, q, t));
  return traj;
}

}  // namespace cutloci

#endif
