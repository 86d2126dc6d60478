#ifndef CUTLOCI_ORTHOGONAL_DISTANCE_HPP
#define CUTLOCI_ORTHOGONAL_DISTANCE_HPP

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "cutloci/errors.hpp"
#include "cutloci/matrix_functions.hpp"
#include "cutloci/random.hpp"

namespace cutloci {

namespace detail {

inline void require_square(const Matrix& a) {
  if (a.rows() != a.cols()) throw DimensionMismatchError("matrix is not square");
}

// Throws Singular when the smallest singular value is below the rank cutoff.
inline Matrix invertible_gram_sqrt_inverse(const Matrix& a) {
  Matrix gram = require_hermitian(Matrix(a.transpose() * a));
  auto eig = hermitian_eigen(gram);
  double lam_max = eig.values.maxCoeff();
  if (lam_max <= 0.0 || std::sqrt(std::max(eig.values.minCoeff(), 0.0)) <
                            kRankTolScale * std::sqrt(lam_max))
    throw SingularError("matrix is singular at the rank tolerance");
  Vector inv_roots = eig.values.array().sqrt().inverse();
  return eig.vectors * inv_roots.asDiagonal() * eig.vectors.transpose();
}

}  // namespace detail

// Squared Frobenius distance from a to the orthogonal group,
//   n + tr(a^T a) - 2 tr(sqrt(a^T a)),
// valid for singular a as well.
inline double dist_sq_to_on(const Matrix& a) {
  detail::require_square(a);
  Matrix gram = a.transpose() * a;
  double n = static_cast<double>(a.rows());
  return n + gram.trace() - 2.0 * sqrt_psd(gram).trace();
}

// Unique closest orthogonal matrix u v^T, defined only for invertible a.
inline Matrix nearest_orthogonal(const Matrix& a) {
  detail::require_square(a);
  auto svd = svd_factors<double>(a);
  double s_max = svd.sigma(0);
  if (s_max <= 0.0 || svd.sigma(svd.sigma.size() - 1) < kRankTolScale * s_max)
    throw SingularError("minimizer not unique for singular input; use equidistant_set_singular");
  return svd.u * svd.v.transpose();
}

// Euclidean gradient 2a - 2a (sqrt(a^T a))^{-1} of dist_sq_to_on.
inline Matrix grad_dist_sq(const Matrix& a) {
  Matrix sqrt_inv = detail::invertible_gram_sqrt_inverse(a);
  return 2.0 * a - 2.0 * a * sqrt_inv;
}

// Finite-difference Hessian of dist_sq_to_on at q in the directions q W, where
// the W form the orthonormal symmetric basis e_i e_i^T, (e_i e_j^T + e_j e_i^T)/sqrt(2).
inline Matrix hessian_normal_block(const Matrix& q, double step = 1e-4) {
  detail::require_square(q);
  Eigen::Index n = q.rows();
  if ((q.transpose() * q - Matrix::Identity(n, n)).norm() > 1e-10)
    throw NotOrthogonalError("base point is not orthogonal at 1e-10");
  std::vector<Matrix> dirs;
  dirs.reserve(n * (n + 1) / 2);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) {
      Matrix w = Matrix::Zero(n, n);
      if (i == j) {
        w(i, i) = 1.0;
      } else {
        w(i, j) = 1.0 / std::sqrt(2.0);
        w(j, i) = 1.0 / std::sqrt(2.0);
      }
      dirs.push_back(q * w);
    }
  Eigen::Index m = static_cast<Eigen::Index>(dirs.size());
  double f0 = dist_sq_to_on(q);
  Matrix hess(m, m);
  for (Eigen::Index k = 0; k < m; ++k) {
    hess(k, k) = (dist_sq_to_on(q + step * dirs[k]) - 2.0 * f0 +
                  dist_sq_to_on(q - step * dirs[k])) /
                 (step * step);
    for (Eigen::Index l = k + 1; l < m; ++l) {
      Matrix plus = dirs[k] + dirs[l];
      Matrix minus = dirs[k] - dirs[l];
      double val = (dist_sq_to_on(q + step * plus) - dist_sq_to_on(q + step * minus) -
                    dist_sq_to_on(q - step * minus) + dist_sq_to_on(q - step * plus)) /
                   (4.0 * step * step);
      hess(k, l) = val;
      hess(l, k) = val;
    }
  }
  return hess;
}

// Negative-gradient flow line through a, in closed form:
//   gamma(t) = a e^{-2t} + (1 - e^{-2t}) a (sqrt(a^T a))^{-1}.
inline Matrix flow_closed_form(const Matrix& a, double t) {
  Matrix sqrt_inv = detail::invertible_gram_sqrt_inverse(a);
  double decay = std::exp(-2.0 * t);
  return decay * a + (1.0 - decay) * a * sqrt_inv;
}

// Defect of the flow ODE gamma' = -2 gamma + 2 gamma (sqrt(gamma^T gamma))^{-1}
// at time t, with gamma' taken by central differences.
inline double flow_ode_residual(const Matrix& a, double t, double step = 1e-5) {
  Matrix gamma = flow_closed_form(a, t);
  Matrix deriv = (flow_closed_form(a, t + step) - flow_closed_form(a, t - step)) / (2.0 * step);
  Matrix rhs = -2.0 * gamma + 2.0 * gamma * detail::invertible_gram_sqrt_inverse(gamma);
  return (deriv - rhs).norm();
}

// Straight-line retraction from a onto its nearest orthogonal matrix.
inline Matrix linear_retraction(const Matrix& a, double t) {
  if (t < 0.0 || t > 1.0) throw Error("retraction parameter outside [0,1]");
  Matrix sqrt_inv = detail::invertible_gram_sqrt_inverse(a);
  return (1.0 - t) * a + t * a * sqrt_inv;
}

// All minimizers of ||a - B|| over O(n) for rank-deficient a: the set
// { u (I_k (+) C) v^T : C in O(n-k) } built on the SVD factors of a.
struct EquidistantSetDescription {
  Matrix u;
  Matrix v;
  int rank = 0;
  int dimension = 0;

  // Member for an explicit C in O(n-k).
  Matrix member(const Matrix& c) const {
    int free_dim = dimension - rank;
    if (c.rows() != free_dim || c.cols() != free_dim)
      throw DimensionMismatchError("block size must be n-k");
    if ((c.transpose() * c - Matrix::Identity(free_dim, free_dim)).norm() > 1e-10)
      throw NotOrthogonalError("block is not orthogonal");
    Matrix core = Matrix::Identity(dimension, dimension);
    core.block(rank, rank, free_dim, free_dim) = c;
    return u * core * v.transpose();
  }

  Matrix draw(Rng& rng) const { return member(haar_orthogonal(dimension - rank, rng)); }
};

inline EquidistantSetDescription equidistant_set_singular(const Matrix& a) {
  detail::require_square(a);
  auto svd = svd_factors<double>(a);
  double s_max = svd.sigma.size() > 0 ? svd.sigma(0) : 0.0;
  int k = 0;
  for (Eigen::Index i = 0; i < svd.sigma.size(); ++i)
    if (svd.sigma(i) > kRankTolScale * s_max) ++k;
  if (k == a.rows()) throw FullRankError("input is invertible; the minimizer is unique");
  return {svd.u, svd.v, k, static_cast<int>(a.rows())};
}

namespace detail {

template <int N>
double best_haar_candidate(const Matrix& a, int samples, Rng& rng, Matrix& best) {
  Eigen::Matrix<double, N, N> af = a;
  double best_val = std::numeric_limits<double>::infinity();
  Eigen::Matrix<double, N, N> best_f;
  for (int i = 0; i < samples; ++i) {
    Eigen::Matrix<double, N, N> b = haar_orthogonal_fixed<N>(rng);
    double val = (af - b).squaredNorm();
    if (val < best_val) {
      best_val = val;
      best_f = b;
    }
  }
  best = best_f;
  return best_val;
}

}  // namespace detail

// Sampling oracle for dist_sq_to_on: best of `samples` Haar draws, then
// projected-gradient refinement along geodesics B exp(t skew(B^T a)) of O(n).
inline double brute_force_dist_sq(const Matrix& a, int samples, std::uint64_t seed) {
  detail::require_square(a);
  if (samples < 1) throw Error("samples must be >= 1");
  int n = static_cast<int>(a.rows());
  Rng rng(seed);
  Matrix best;
  if (n == 2) {
    detail::best_haar_candidate<2>(a, samples, rng, best);
  } else if (n == 3) {
    detail::best_haar_candidate<3>(a, samples, rng, best);
  } else {
    double best_val = std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i) {
      Matrix b = haar_orthogonal(n, rng);
      double val = (a - b).squaredNorm();
      if (val < best_val) {
        best_val = val;
        best = b;
      }
    }
  }
  // Ascent on tr(a^T B); equivalent to descending ||a - B||^2 over O(n).
  Matrix b = best;
  for (int iter = 0; iter < 500; ++iter) {
    Matrix bta = b.transpose() * a;
    Matrix s = (bta - bta.transpose()) / 2.0;
    double gnorm = s.norm();
    if (gnorm < 1e-10) break;
    double h0 = (a.transpose() * b).trace();
    double t = 1.0;
    while (t > 1e-12) {
      Matrix candidate = b * matrix_exp<double>(t * s);
      if ((a.transpose() * candidate).trace() > h0 + 0.5 * t * gnorm * gnorm) {
        b = candidate;
        break;
      }
      t /= 2.0;
    }
    if (t <= 1e-12) break;
  }
  return (a - b).squaredNorm();
}

}  // namespace cutloci

#endif
