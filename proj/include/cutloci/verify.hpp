#pragma once

// Self-contained verification suite. Each check draws its own deterministic
// RNG stream from the caller's seed, runs a fixed workload, and reports a
// pass flag plus a short numeric summary. Output contains no timing so a
// given seed always produces identical bytes.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "cutloci/cut_time.hpp"
#include "cutloci/gradient_flow.hpp"
#include "cutloci/indefinite_unitary.hpp"
#include "cutloci/left_invariant.hpp"
#include "cutloci/matrix_functions.hpp"
#include "cutloci/model_spaces.hpp"
#include "cutloci/orthogonal_distance.hpp"
#include "cutloci/random.hpp"

namespace cutloci::verify {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

namespace detail {

inline std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3e", x);
  return buf;
}

// splitmix64 finalizer; decorrelates the per-check streams.
inline std::uint64_t mix(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline double uniform(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

}  // namespace detail

// Closed-form squared distance to O(n) against a sampling-plus-refinement
// search that never touches the formula. Bound 1e-4.
inline CheckResult check_distance_oracle(std::uint64_t seed) {
  Rng rng(detail::mix(seed, 1));
  double worst = 0.0;
  for (int n : {2, 3}) {
    for (int i = 0; i < 50; ++i) {
      Matrix a = gaussian_matrix(n, n, rng);
      double direct = dist_sq_to_on(a);
      double searched = brute_force_dist_sq(a, 100000, rng());
      worst = std::max(worst, std::abs(direct - searched));
    }
  }
  CheckResult r;
  r.name = "distance_oracle";
  r.pass = worst < 1e-4;
  r.detail = "max |closed form - search| = " + detail::fmt(worst) + " over 100 matrices, bound 1e-04";
  return r;
}

// The closed-form flow curve satisfies gamma' = -grad f(gamma) pointwise.
// Finite-difference residual bound 1e-7.
inline CheckResult check_flow_exactness(std::uint64_t seed) {
  Rng rng(detail::mix(seed, 2));
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    Matrix a = random_invertible(3, 0.2, rng);
    for (double t : {0.1, 0.5, 1.0, 2.0})
      worst = std::max(worst, flow_ode_residual(a, t));
  }
  CheckResult r;
  r.name = "flow_exactness";
  r.pass = worst < 1e-7;
  r.detail = "max ODE residual = " + detail::fmt(worst) + " over 100 starts x 4 times, bound 1e-07";
  return r;
}

// Normal Hessian of f at an orthogonal point is twice the identity on the
// n(n+1)/2 symmetric directions. Entrywise bound 1e-5.
inline CheckResult check_hessian_block(std::uint64_t seed) {
  Rng rng(detail::mix(seed, 3));
  double worst = 0.0;
  for (int n : {2, 3}) {
    int dim = n * (n + 1) / 2;
    for (int i = 0; i < 20; ++i) {
      Matrix q = haar_orthogonal(n, rng);
      Matrix h = hessian_normal_block(q);
      worst = std::max(worst, (h - 2.0 * Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff());
    }
  }
  CheckResult r;
  r.name = "hessian_block";
  r.pass = worst < 1e-5;
  r.detail = "max |H - 2I| entry = " + detail::fmt(worst) + " over 40 base points, bound 1e-05";
  return r;
}

// Left-invariant distance to SO(n): diag(e, e^2) sits at distance sqrt(5),
// and numeric arc length along the matched geodesic agrees with the formula.
inline CheckResult check_left_invariant_distance(std::uint64_t seed) {
  Rng rng(detail::mix(seed, 4));
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = std::exp(1.0);
  m(1, 1) = std::exp(2.0);
  double closed_err = std::abs(dist_to_son(m) - std::sqrt(5.0));
  double worst_len = 0.0;
  for (int i = 0; i < 20; ++i) {
    Matrix a = random_gl_plus(3, 0.3, rng);
    worst_len = std::max(worst_len, std::abs(geodesic_length_numeric(a, 2000) - dist_to_son(a)));
  }
  CheckResult r;
  r.name = "left_invariant_distance";
  r.pass = closed_err < 1e-10 && worst_len < 1e-5;
  r.detail = "diag(e,e^2) error = " + detail::fmt(closed_err) +
             " (bound 1e-10); max |arc length - formula| = " + detail::fmt(worst_len) +
             " over 20 matrices, bound 1e-05";
  return r;
}

// U(p,q) package: closure under product/inverse/positive square root, polar
// factor reconstruction, the half-block inverse identity, the closed-form
// exponential on the anti-diagonal part, and squared distance 2r^2 for the
// rank-one geodesic at r in {0.1, 1, 3}.
inline CheckResult check_upq_factorization(std::uint64_t seed) {
  Rng rng(detail::mix(seed, 5));
  const std::vector<Signature> sigs = {{1, 1}, {2, 1}, {2, 2}};
  const int counts[] = {34, 33, 33};
  double worst_member = 0.0, worst_polar = 0.0, worst_binv = 0.0;
  double worst_exp = 0.0, worst_dist = 0.0;
  using Cplx = std::complex<double>;
  for (int si = 0; si < 3; ++si) {
    const Signature& sig = sigs[si];
    int n = sig.n(), p = sig.p, q = sig.q;
    for (int i = 0; i < counts[si]; ++i) {
      UpqElement a = random_upq(sig, rng());
      UpqElement b = random_upq(sig, rng());
      CMatrix gram = a.mat.adjoint() * a.mat;
      worst_member = std::max({worst_member, is_upq(a.mat * b.mat, sig).residual,
                               is_upq(upq_inverse(a).mat, sig).residual,
                               is_upq(sqrt_pd<Cplx>(gram), sig).residual});
      UpqPolar pol = polar_upq(a);
      worst_polar = std::max(worst_polar, (pol.u.mat * matrix_exp<Cplx>(pol.y) - a.mat).norm());
      CMatrix gram_plus = gram + CMatrix::Identity(n, n);
      worst_binv = std::max(worst_binv, (block_inverse(a) - gram_plus.inverse()).norm());
      CMatrix bm = gaussian_complex_matrix(p, q, rng);
      double bn = bm.norm();
      if (bn > 1.2) bm *= 1.2 / bn;
      CMatrix y = CMatrix::Zero(n, n);
      y.topRightCorner(p, q) = bm;
      y.bottomLeftCorner(q, p) = bm.adjoint();
      worst_exp = std::max(worst_exp, (exp_n_closed_form(y, sig) - matrix_exp<Cplx>(y)).norm());
    }
    for (double radius : {0.1, 1.0, 3.0}) {
      CMatrix y = CMatrix::Zero(n, n);
      y(0, p) = radius;
      y(p, 0) = radius;
      UpqElement el = make_upq(exp_n_closed_form(y, sig), sig);
      worst_dist = std::max(worst_dist, std::abs(dist_sq_upq(el) - 2.0 * radius * radius));
    }
  }
  CheckResult r;
  r.name = "upq_factorization";
  r.pass = worst_member < 1e-8 && worst_polar < 1e-7 && worst_binv < 1e-9 &&
           worst_exp < 1e-9 && worst_dist < 1e-9;
  r.detail = "membership " + detail::fmt(worst_member) + " (1e-08); polar " +
             detail::fmt(worst_polar) + " (1e-07); block inverse " + detail::fmt(worst_binv) +
             " (1e-09); exp vs series " + detail::fmt(worst_exp) + " (1e-09); dist 2r^2 " +
             detail::fmt(worst_dist) + " (1e-09); 100 elements over 3 signatures";
  return r;
}

// Derivative of the matrix square root: Sylvester residual, agreement with a
// central finite difference, and agreement with the integral representation.
inline CheckResult check_frechet_derivative(std::uint64_t seed) {
  Rng rng(detail::mix(seed, 6));
  double worst_syl = 0.0, worst_fd = 0.0, worst_quad = 0.0;
  for (int i = 0; i < 50; ++i) {
    Matrix a = random_spd(3, 0.5, 2.0, rng);
    Matrix g = gaussian_matrix(3, 3, rng);
    Matrix h = (g + g.transpose()) / 2.0;
    Matrix x = frechet_sqrt<double>(a, h);
    Matrix s = sqrt_pd<double>(a);
    worst_syl = std::max(worst_syl, (x * s + s * x - h).norm());
    double eps = 1e-5;
    Matrix fd =
        (sqrt_pd<double>(Matrix(a + eps * h)) - sqrt_pd<double>(Matrix(a - eps * h))) / (2 * eps);
    worst_fd = std::max(worst_fd, (x - fd).norm());
    auto quad = frechet_sqrt_quadrature<double>(a, h);
    worst_quad = std::max(worst_quad, (x - quad.value).norm());
  }
  CheckResult r;
  r.name = "frechet_derivative";
  r.pass = worst_syl < 1e-10 && worst_fd < 1e-6 && worst_quad < 1e-5;
  r.detail = "Sylvester residual " + detail::fmt(worst_syl) + " (1e-10); vs finite difference " +
             detail::fmt(worst_fd) + " (1e-06); vs quadrature " + detail::fmt(worst_quad) +
             " (1e-05); 50 SPD pairs";
  return r;
}

// One-sided slopes of t -> nuclear norm of A + tB: at a rank-k matrix with B
// the co-kernel alignment, right minus left slope equals twice the nullity;
// at an invertible matrix the two slopes agree.
inline CheckResult check_one_sided_slopes(std::uint64_t seed) {
  Rng rng(detail::mix(seed, 7));
  double worst = 0.0;
  for (int k : {0, 1, 2}) {
    for (int i = 0; i < 10; ++i) {
      Matrix u = haar_orthogonal(3, rng);
      Matrix v = haar_orthogonal(3, rng);
      Vector sv = Vector::Zero(3);
      for (int j = 0; j < k; ++j) sv(j) = 0.5 + 1.5 * detail::uniform(rng);
      Vector dv = Vector::Zero(3);
      for (int j = k; j < 3; ++j) dv(j) = 1.0;
      Matrix a = u * sv.asDiagonal() * v.transpose();
      Matrix b = u * dv.asDiagonal() * v.transpose();
      OneSidedSlopes sl = g_one_sided_derivatives(a, b);
      worst = std::max(worst, std::abs((sl.right - sl.left) - 2.0 * (3 - k)));
    }
  }
  double worst_smooth = 0.0;
  for (int i = 0; i < 10; ++i) {
    Matrix a = random_invertible(3, 0.4, rng);
    Matrix b = gaussian_matrix(3, 3, rng);
    OneSidedSlopes sl = g_one_sided_derivatives(a, b);
    worst_smooth = std::max(worst_smooth, std::abs(sl.right - sl.left));
  }
  CheckResult r;
  r.name = "one_sided_slopes";
  r.pass = worst < 1e-3 && worst_smooth < 1e-6;
  r.detail = "max |(right - left) - 2 nullity| = " + detail::fmt(worst) +
             " over ranks 0..2, 10 draws each (1e-03); invertible slope gap " +
             detail::fmt(worst_smooth) + " (1e-06)";
  return r;
}

// Cut times along 200 sampled unit normals per case: pi/2 for equators,
// pi for a point, pi/4 with cut points on the flat torus for the linked
// circles, and for the 2x1 ellipse the cut points land on the segment
// |x| <= 1.5 on the major axis.
inline CheckResult check_cut_times(std::uint64_t seed) {
  Rng rng(detail::mix(seed, 8));
  const double half_pi = M_PI / 2.0;
  const int per_case = 200;
  double worst_eq2 = 0.0, worst_eq3 = 0.0, worst_pt = 0.0;
  double worst_cl = 0.0, worst_cl_geom = 0.0, worst_el = 0.0;
  {
    ModelSpace m = RoundSphere{2};
    Submanifold s = Equator{2, 1};
    for (int i = 0; i < per_case; ++i) {
      auto cs = s_function(m, s, sample_unit_normal(m, s, rng));
      worst_eq2 = std::max(worst_eq2, std::abs(cs.s_value - half_pi));
    }
  }
  {
    ModelSpace m = RoundSphere{3};
    Submanifold s = Equator{3, 2};
    for (int i = 0; i < per_case; ++i) {
      auto cs = s_function(m, s, sample_unit_normal(m, s, rng));
      worst_eq3 = std::max(worst_eq3, std::abs(cs.s_value - half_pi));
    }
  }
  {
    ModelSpace m = RoundSphere{2};
    Submanifold s = SpherePoint{random_unit_vector(3, rng)};
    for (int i = 0; i < per_case; ++i) {
      auto cs = s_function(m, s, sample_unit_normal(m, s, rng));
      worst_pt = std::max(worst_pt, std::abs(cs.s_value - M_PI));
    }
  }
  {
    ModelSpace m = RoundSphere{3};
    Submanifold s = LinkedCircles{};
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < per_case; ++i) {
      auto cs = s_function(m, s, sample_unit_normal(m, s, rng));
      worst_cl = std::max(worst_cl, std::abs(cs.s_value - half_pi / 2.0));
      worst_cl_geom = std::max({worst_cl_geom, std::abs(cs.cut_point.head(2).norm() - inv_sqrt2),
                                std::abs(cs.cut_point.tail(2).norm() - inv_sqrt2)});
    }
  }
  {
    ModelSpace m = EuclideanPlane{};
    Submanifold s = Ellipse{2.0, 1.0};
    auto ends = ellipse_cut_segment(2.0, 1.0);
    double end_err = std::abs(ends.first(0) + 1.5) + std::abs(ends.second(0) - 1.5) +
                     std::abs(ends.first(1)) + std::abs(ends.second(1));
    // The two major-axis normals must produce the segment endpoints themselves.
    for (double side : {1.0, -1.0}) {
      Point base(2), dir(2);
      base << side * 2.0, 0.0;
      dir << -side, 0.0;
      auto cs = s_function(m, s, make_unit_normal(m, s, base, dir), 1e-9);
      end_err = std::max(end_err, std::hypot(cs.cut_point(0) - side * 1.5, cs.cut_point(1)));
    }
    worst_el = end_err;
    for (int i = 0; i < per_case; ++i) {
      auto cs = s_function(m, s, sample_unit_normal(m, s, rng), 1e-9);
      double over = std::max(std::abs(cs.cut_point(0)) - 1.5, 0.0);
      worst_el = std::max(worst_el, std::hypot(over, cs.cut_point(1)));
    }
  }
  CheckResult r;
  r.name = "cut_times";
  r.pass = worst_eq2 < 1e-7 && worst_eq3 < 1e-7 && worst_pt < 1e-7 && worst_cl < 1e-7 &&
           worst_cl_geom < 1e-7 && worst_el < 1e-6;
  r.detail = "200 normals/case: circle in S^2 " + detail::fmt(worst_eq2) + ", S^2 in S^3 " +
             detail::fmt(worst_eq3) + ", point " + detail::fmt(worst_pt) + ", linked circles " +
             detail::fmt(worst_cl) + " (all 1e-07); torus deviation " + detail::fmt(worst_cl_geom) +
             " (1e-07); ellipse segment deviation " + detail::fmt(worst_el) + " (1e-06)";
  return r;
}

// Directional expansion of the squared distance to the 2x1 ellipse at the
// segment endpoint (1.5, 0): both slopes -1, curvature 1 from the right and
// -1/3 from the left; an interior segment point shows a genuine slope kink.
inline CheckResult check_ellipse_regularity(std::uint64_t /*seed*/) {
  Point endpoint(2);
  endpoint << 1.5, 0.0;
  DirectionalExpansion ex = ellipse_dsq_directional(2.0, 1.0, 1.0, 0.0, endpoint);
  double err_ls = std::abs(ex.left_slope + 1.0);
  double err_rs = std::abs(ex.right_slope + 1.0);
  double err_lq = std::abs(ex.left_quadratic + 1.0 / 3.0);
  double err_rq = std::abs(ex.right_quadratic - 1.0);
  Point interior(2);
  interior << 0.5, 0.0;
  DirectionalExpansion se = ellipse_dsq_directional(2.0, 1.0, 0.0, 1.0, interior);
  double kink = std::abs(se.left_slope - se.right_slope);
  CheckResult r;
  r.name = "ellipse_regularity";
  r.pass = err_ls < 1e-4 && err_rs < 1e-4 && err_lq < 1e-3 && err_rq < 1e-3 && kink > 0.1;
  r.detail = "slope errors " + detail::fmt(err_ls) + "/" + detail::fmt(err_rs) +
             " (1e-04); quadratic errors " + detail::fmt(err_lq) + "/" + detail::fmt(err_rq) +
             " (1e-03); interior kink " + detail::fmt(kink) + " (> 0.1)";
  return r;
}

// The rescaled normal exponential onto the open disk bundle stays injective:
// 10^4 samples per case, no image collisions allowed.
inline CheckResult check_injectivity(std::uint64_t seed) {
  Rng rng(detail::mix(seed, 10));
  ModelSpace m = RoundSphere{2};
  InjectivityReport eq = injectivity_check(m, Equator{2, 1}, 10000, rng());
  InjectivityReport pt = injectivity_check(m, SpherePoint{random_unit_vector(3, rng)}, 10000, rng());
  CheckResult r;
  r.name = "injectivity";
  r.pass = eq.collisions == 0 && pt.collisions == 0;
  r.detail = "collisions " + std::to_string(eq.collisions) + "/" + std::to_string(pt.collisions) +
             " in 2 x 10000 samples; min image separations " +
             detail::fmt(eq.min_image_separation) + ", " + detail::fmt(pt.min_image_separation);
  return r;
}

// Flow decay law dist(t) = dist(0) e^{-2t} and gradient norm 2 dist, sampled
// strictly inside the cut radius for all four model cases.
inline CheckResult check_flow_laws(std::uint64_t seed) {
  Rng rng(detail::mix(seed, 11));
  std::vector<std::pair<ModelSpace, Submanifold>> cases;
  cases.emplace_back(RoundSphere{2}, Equator{2, 1});
  cases.emplace_back(RoundSphere{2}, SpherePoint{random_unit_vector(3, rng)});
  cases.emplace_back(RoundSphere{3}, LinkedCircles{});
  cases.emplace_back(EuclideanPlane{}, Ellipse{2.0, 1.0});
  double worst_decay = 0.0, worst_grad = 0.0;
  for (const auto& [model, sub] : cases) {
    for (int i = 0; i < 100; ++i) {
      UnitNormal v = sample_unit_normal(model, sub, rng);
      auto cs = s_function(model, sub, v);
      double radius = 0.05 + 0.85 * detail::uniform(rng);
      Point q = geodesic(model, v.base, v.dir, radius * cs.s_value);
      double d0 = dist_to_submanifold(model, sub, q).distance;
      double t = 0.1 + 1.9 * detail::uniform(rng);
      Point flowed = flow_to_submanifold(model, sub, q, t);
      double dt = dist_to_submanifold(model, sub, flowed).distance;
      worst_decay = std::max(worst_decay, std::abs(dt - d0 * std::exp(-2.0 * t)));
      Point grad = grad_dist_sq_geom(model, sub, q);
      worst_grad = std::max(worst_grad, std::abs(grad.norm() - 2.0 * d0));
    }
  }
  CheckResult r;
  r.name = "flow_laws";
  r.pass = worst_decay < 1e-8 && worst_grad < 1e-9;
  r.detail = "max decay deviation " + detail::fmt(worst_decay) +
             " (1e-08); max |grad norm - 2 dist| = " + detail::fmt(worst_grad) +
             " (1e-09); 100 samples x 4 cases";
  return r;
}

inline std::vector<CheckResult> run_all(std::uint64_t seed) {
  return {check_distance_oracle(seed),        check_flow_exactness(seed),
          check_hessian_block(seed),          check_left_invariant_distance(seed),
          check_upq_factorization(seed),      check_frechet_derivative(seed),
          check_one_sided_slopes(seed),       check_cut_times(seed),
          check_ellipse_regularity(seed),     check_injectivity(seed),
          check_flow_laws(seed)};
}

}  // namespace cutloci::verify
