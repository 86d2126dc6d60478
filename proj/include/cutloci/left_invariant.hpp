#ifndef CUTLOCI_LEFT_INVARIANT_HPP
#define CUTLOCI_LEFT_INVARIANT_HPP

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <limits>

#include "cutloci/errors.hpp"
#include "cutloci/matrix_functions.hpp"

namespace cutloci {

// Metric g_p(x, y) = tr((p^{-1} x)^T (p^{-1} y)); the Frobenius product moved
// around the group by left translation.
inline double metric_eval(const Matrix& p, const Matrix& x, const Matrix& y) {
  if (p.rows() != p.cols()) throw DimensionMismatchError("base point is not square");
  if (x.rows() != p.rows() || x.cols() != p.cols() || y.rows() != p.rows() ||
      y.cols() != p.cols())
    throw DimensionMismatchError("tangent vector shape mismatch");
  Eigen::FullPivLU<Matrix> lu(p);
  lu.setThreshold(1e-12);
  if (!lu.isInvertible()) throw SingularError("base point is singular");
  Matrix px = lu.solve(x);
  Matrix py = lu.solve(y);
  return (px.transpose() * py).trace();
}

namespace detail {

inline void require_positive_det(const Matrix& a) {
  if (a.rows() != a.cols()) throw DimensionMismatchError("matrix is not square");
  if (a.determinant() <= 0.0)
    throw NonPositiveDeterminantError("determinant must be positive");
}

}  // namespace detail

// Geodesic distance from a to the rotation group under the left-invariant
// metric: the Frobenius norm of log sqrt(a^T a), i.e. sqrt(sum log(sigma_i)^2).
inline double dist_to_son(const Matrix& a) {
  detail::require_positive_det(a);
  auto svd = svd_factors<double>(a);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < svd.sigma.size(); ++i) {
    double lg = std::log(svd.sigma(i));
    acc += lg * lg;
  }
  return std::sqrt(acc);
}

// Minimal geodesic from the nearest rotation (t=0) to a (t=1):
//   gamma(t) = a (sqrt(a^T a))^{-1} exp(t log sqrt(a^T a)).
inline Matrix geodesic_to_son(const Matrix& a, double t) {
  detail::require_positive_det(a);
  auto svd = svd_factors<double>(a);
  if (svd.sigma(svd.sigma.size() - 1) < kRankTolScale * svd.sigma(0))
    throw SingularError("matrix is singular at the rank tolerance");
  Matrix s = sqrt_pd<double>(Matrix(a.transpose() * a));
  Matrix rotation = a * s.inverse();
  Matrix log_s = principal_log_eig<double>(s);
  return rotation * matrix_exp<double>(Matrix(t * log_s));
}

// Composite-Simpson length of geodesic_to_son over [0,1], with the velocity
// taken by central differences of the closed-form curve.
inline double geodesic_length_numeric(const Matrix& a, int steps, double fd_step = 1e-5) {
  if (steps < 2) throw Error("steps must be >= 2");
  if (steps % 2 == 1) ++steps;
  auto speed = [&](double t) {
    Matrix gamma = geodesic_to_son(a, t);
    Matrix deriv = (geodesic_to_son(a, t + fd_step) - geodesic_to_son(a, t - fd_step)) /
                   (2.0 * fd_step);
    return std::sqrt(metric_eval(gamma, deriv, deriv));
  };
  double h = 1.0 / steps;
  double acc = speed(0.0) + speed(1.0);
  for (int i = 1; i < steps; ++i) acc += (i % 2 == 1 ? 4.0 : 2.0) * speed(i * h);
  return acc * h / 3.0;
}

inline double smallest_singular_value(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

namespace detail {

// Length of the one-parameter-subgroup curve t -> b exp(t log(b^T a)) joining
// b to a: the Frobenius norm of the principal log of b^T a. Infinite when the
// spectrum touches the closed negative real axis (no principal branch).
inline double subgroup_arc_length(const Matrix& b, const Matrix& a) {
  Matrix m = b.transpose() * a;
  Eigen::EigenSolver<Matrix> es(m);
  if (es.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
  Eigen::VectorXcd lam = es.eigenvalues();
  for (Eigen::Index i = 0; i < lam.size(); ++i)
    if (lam(i).real() <= 0.0 && std::abs(lam(i).imag()) < 1e-12)
      return std::numeric_limits<double>::infinity();
  Eigen::MatrixXcd w = es.eigenvectors();
  Eigen::VectorXcd logs(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i) logs(i) = std::log(lam(i));
  Eigen::MatrixXcd lg = w * logs.asDiagonal() * w.inverse();
  return lg.real().norm();
}

}  // namespace detail

// Local minimization over SO(n) of the joining-curve length, used to probe
// uniqueness of the distance minimizer. Finite-difference gradient descent in
// exponential coordinates b exp(sum_k t_k E_k) with E_k the skew basis.
inline Matrix nearest_rotation_descent(const Matrix& a, const Matrix& start,
                                       int max_iters = 400) {
  detail::require_positive_det(a);
  int n = static_cast<int>(a.rows());
  std::vector<Matrix> basis;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Matrix e = Matrix::Zero(n, n);
      e(i, j) = 1.0;
      e(j, i) = -1.0;
      basis.push_back(e / std::sqrt(2.0));
    }
  Matrix b = start;
  // The joining curve has no principal branch on a whole region around the
  // antipodal rotations, where b^T a picks up unpaired negative eigenvalues.
  // Slide along the basis directions with growing amplitude until the length
  // is finite, then descend.
  if (!std::isfinite(detail::subgroup_arc_length(b, a))) {
    bool escaped = false;
    for (int k = 1; k <= 80 && !escaped; ++k) {
      double amp = 0.05 * ((k + 1) / 2) * (k % 2 == 0 ? -1.0 : 1.0);
      Matrix e = basis[static_cast<size_t>((k / 2) % static_cast<int>(basis.size()))];
      Matrix cand = b * matrix_exp<double>(Matrix(amp * e));
      if (std::isfinite(detail::subgroup_arc_length(cand, a))) {
        b = cand;
        escaped = true;
      }
    }
    if (!escaped) throw Error("no finite joining curve near the start");
  }
  double fd = 1e-6;
  for (int iter = 0; iter < max_iters; ++iter) {
    double f0 = detail::subgroup_arc_length(b, a);
    Eigen::VectorXd grad(basis.size());
    for (size_t k = 0; k < basis.size(); ++k) {
      double plus = detail::subgroup_arc_length(b * matrix_exp<double>(Matrix(fd * basis[k])), a);
      double minus =
          detail::subgroup_arc_length(b * matrix_exp<double>(Matrix(-fd * basis[k])), a);
      double g;
      if (std::isfinite(plus) && std::isfinite(minus))
        g = (plus - minus) / (2.0 * fd);
      else if (std::isfinite(plus))
        g = (plus - f0) / fd;
      else if (std::isfinite(minus))
        g = (f0 - minus) / fd;
      else
        g = 0.0;  // hemmed in on this axis; the other directions still move
      grad(static_cast<Eigen::Index>(k)) = g;
    }
    double gnorm = grad.norm();
    if (gnorm < 1e-10) break;
    Matrix dir = Matrix::Zero(n, n);
    for (size_t k = 0; k < basis.size(); ++k) dir -= grad(static_cast<Eigen::Index>(k)) * basis[k];
    double t = 1.0;
    bool moved = false;
    while (t > 1e-14) {
      Matrix candidate = b * matrix_exp<double>(Matrix(t * dir));
      if (detail::subgroup_arc_length(candidate, a) < f0 - 0.25 * t * gnorm * gnorm) {
        b = candidate;
        moved = true;
        break;
      }
      t /= 2.0;
    }
    if (!moved) break;
  }
  return b;
}

}  // namespace cutloci

#endif
