#ifndef CUTLOCI_MATRIX_FUNCTIONS_HPP
#define CUTLOCI_MATRIX_FUNCTIONS_HPP

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "cutloci/errors.hpp"

namespace cutloci {

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Matrix = Eigen::MatrixXd;
using CMatrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXd;

// Validation tolerances shared across the library.
inline constexpr double kSymmetryTolScale = 1e-8;
inline constexpr double kRankTolScale = 1e-8;

// Checks near-Hermitian input, then returns the symmetrized matrix.
template <typename Scalar>
DenseMatrix<Scalar> require_hermitian(const DenseMatrix<Scalar>& a) {
  if (a.rows() != a.cols()) throw DimensionMismatchError("matrix is not square");
  double defect = (a - a.adjoint()).norm();
  if (defect > kSymmetryTolScale * (1.0 + a.norm()))
    throw NotSymmetricError("asymmetry " + std::to_string(defect) + " exceeds tolerance");
  return ((a + DenseMatrix<Scalar>(a.adjoint())) / 2.0).eval();
}

namespace detail {

template <typename Scalar>
struct HermitianEigen {
  DenseMatrix<Scalar> vectors;
  Vector values;
};

template <typename Scalar>
HermitianEigen<Scalar> hermitian_eigen(const DenseMatrix<Scalar>& a) {
  Eigen::SelfAdjointEigenSolver<DenseMatrix<Scalar>> es(a);
  if (es.info() != Eigen::Success) throw Error("eigendecomposition failed");
  return {es.eigenvectors(), es.eigenvalues()};
}

// Rebuilds q diag(f(lambda)) q* for a scalar function f of the eigenvalues.
template <typename Scalar, typename Fn>
DenseMatrix<Scalar> hermitian_apply(const DenseMatrix<Scalar>& a, Fn&& fn) {
  auto eig = hermitian_eigen(a);
  Vector mapped(eig.values.size());
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) mapped(i) = fn(eig.values(i));
  return eig.vectors * mapped.asDiagonal() * eig.vectors.adjoint();
}

}  // namespace detail

// Square root of a Hermitian positive definite matrix by eigendecomposition.
template <typename Scalar>
DenseMatrix<Scalar> sqrt_pd(const DenseMatrix<Scalar>& a) {
  DenseMatrix<Scalar> sym = require_hermitian(a);
  auto eig = detail::hermitian_eigen(sym);
  if (eig.values.minCoeff() <= 0.0)
    throw NotPositiveDefiniteError("min eigenvalue " + std::to_string(eig.values.minCoeff()));
  Vector roots = eig.values.array().sqrt();
  return eig.vectors * roots.asDiagonal() * eig.vectors.adjoint();
}

// Positive semidefinite square root; tiny negative eigenvalues from roundoff
// are clamped to zero so singular gram matrices are accepted.
template <typename Scalar>
DenseMatrix<Scalar> sqrt_psd(const DenseMatrix<Scalar>& a) {
  DenseMatrix<Scalar> sym = require_hermitian(a);
  return detail::hermitian_apply(sym, [](double lam) { return std::sqrt(std::max(lam, 0.0)); });
}

// Principal logarithm of a Hermitian positive definite matrix.
template <typename Scalar>
DenseMatrix<Scalar> principal_log_eig(const DenseMatrix<Scalar>& a) {
  DenseMatrix<Scalar> sym = require_hermitian(a);
  auto eig = detail::hermitian_eigen(sym);
  if (eig.values.minCoeff() <= 0.0)
    throw NotPositiveDefiniteError("min eigenvalue " + std::to_string(eig.values.minCoeff()));
  Vector logs = eig.values.array().log();
  return eig.vectors * logs.asDiagonal() * eig.vectors.adjoint();
}

// Principal logarithm through the series
//   log a = -2 * sum_{m>=0} c^{2m+1} / (2m+1),  c = (I-a)(I+a)^{-1},
// convergent whenever every eigenvalue of a has positive real part.
template <typename Scalar>
DenseMatrix<Scalar> principal_log_gregory(const DenseMatrix<Scalar>& a, double tol = 1e-14,
                                          int max_terms = 10000) {
  DenseMatrix<Scalar> sym = require_hermitian(a);
  auto eig = detail::hermitian_eigen(sym);
  if (eig.values.minCoeff() <= 0.0)
    throw NotPositiveDefiniteError("min eigenvalue " + std::to_string(eig.values.minCoeff()));
  Eigen::Index n = sym.rows();
  DenseMatrix<Scalar> id = DenseMatrix<Scalar>::Identity(n, n);
  DenseMatrix<Scalar> c = (id + sym).ldlt().solve(id - sym);
  DenseMatrix<Scalar> c2 = c * c;
  DenseMatrix<Scalar> power = c;
  DenseMatrix<Scalar> sum = c;
  bool converged = false;
  for (int m = 1; m <= max_terms; ++m) {
    power = power * c2;
    DenseMatrix<Scalar> term = power / static_cast<double>(2 * m + 1);
    sum += term;
    if (2.0 * term.norm() < tol) {
      converged = true;
      break;
    }
  }
  if (!converged) throw NoConvergenceError("series did not reach tol within max_terms");
  DenseMatrix<Scalar> result = -2.0 * sum;
  return ((result + DenseMatrix<Scalar>(result.adjoint())) / 2.0).eval();
}

// Matrix exponential by scaling and squaring of a truncated series.
template <typename Scalar>
DenseMatrix<Scalar> matrix_exp(const DenseMatrix<Scalar>& a) {
  if (a.rows() != a.cols()) throw DimensionMismatchError("matrix is not square");
  Eigen::Index n = a.rows();
  int squarings = 0;
  double norm = a.norm();
  while (norm > 0.25) {
    norm /= 2.0;
    ++squarings;
  }
  DenseMatrix<Scalar> scaled = a / std::pow(2.0, squarings);
  DenseMatrix<Scalar> term = DenseMatrix<Scalar>::Identity(n, n);
  DenseMatrix<Scalar> sum = term;
  for (int k = 1; k <= 40; ++k) {
    term = (term * scaled / static_cast<double>(k)).eval();
    sum += term;
    if (term.norm() <= 1e-18 * sum.norm()) break;
  }
  for (int i = 0; i < squarings; ++i) sum = (sum * sum).eval();
  return sum;
}

// Directional derivative of the matrix square root: the unique symmetric x with
//   x sqrt(a) + sqrt(a) x = h,
// solved entrywise in the eigenbasis of a.
template <typename Scalar>
DenseMatrix<Scalar> frechet_sqrt(const DenseMatrix<Scalar>& a, const DenseMatrix<Scalar>& h) {
  DenseMatrix<Scalar> sym = require_hermitian(a);
  DenseMatrix<Scalar> hsym = require_hermitian(h);
  if (sym.rows() != hsym.rows()) throw DimensionMismatchError("direction shape mismatch");
  auto eig = detail::hermitian_eigen(sym);
  if (eig.values.minCoeff() <= 0.0)
    throw NotPositiveDefiniteError("min eigenvalue " + std::to_string(eig.values.minCoeff()));
  DenseMatrix<Scalar> ht = eig.vectors.adjoint() * hsym * eig.vectors;
  Eigen::Index n = sym.rows();
  DenseMatrix<Scalar> xt(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      xt(i, j) = ht(i, j) / (std::sqrt(eig.values(i)) + std::sqrt(eig.values(j)));
  DenseMatrix<Scalar> x = eig.vectors * xt * eig.vectors.adjoint();
  return ((x + DenseMatrix<Scalar>(x.adjoint())) / 2.0).eval();
}

template <typename Scalar>
struct QuadratureResult {
  DenseMatrix<Scalar> value;
  double error_bound;  // truncated tail plus composite-Simpson remainder
};

// Same directional derivative through the integral representation
//   x = integral_0^inf exp(-t sqrt(a)) h exp(-t sqrt(a)) dt,
// evaluated by composite Simpson on [0, t_max].
template <typename Scalar>
QuadratureResult<Scalar> frechet_sqrt_quadrature(const DenseMatrix<Scalar>& a,
                                                 const DenseMatrix<Scalar>& h,
                                                 double t_max = 20.0, int steps = 2000) {
  DenseMatrix<Scalar> sym = require_hermitian(a);
  DenseMatrix<Scalar> hsym = require_hermitian(h);
  if (sym.rows() != hsym.rows()) throw DimensionMismatchError("direction shape mismatch");
  auto eig = detail::hermitian_eigen(sym);
  if (eig.values.minCoeff() <= 0.0)
    throw NotPositiveDefiniteError("min eigenvalue " + std::to_string(eig.values.minCoeff()));
  if (steps % 2 == 1) ++steps;
  Vector roots = eig.values.array().sqrt();
  double s_min = roots.minCoeff();
  double s_max = roots.maxCoeff();
  auto integrand = [&](double t) {
    Vector decay = (-t * roots.array()).exp();
    DenseMatrix<Scalar> e = eig.vectors * decay.asDiagonal() * eig.vectors.adjoint();
    return DenseMatrix<Scalar>(e * hsym * e);
  };
  double step = t_max / steps;
  DenseMatrix<Scalar> acc = integrand(0.0) + integrand(t_max);
  for (int i = 1; i < steps; ++i) acc += (i % 2 == 1 ? 4.0 : 2.0) * integrand(i * step);
  QuadratureResult<Scalar> out;
  out.value = (step / 3.0) * acc;
  double tail = hsym.norm() * std::exp(-2.0 * t_max * s_min) / (2.0 * s_min);
  double simpson = t_max * std::pow(step, 4) / 180.0 * std::pow(2.0 * s_max, 4) * hsym.norm();
  out.error_bound = tail + simpson;
  return out;
}

template <typename Scalar>
struct PolarFactors {
  DenseMatrix<Scalar> q_factor;  // orthogonal / unitary
  DenseMatrix<Scalar> s_factor;  // Hermitian positive semidefinite
};

// Polar decomposition a = q s with s = sqrt(a* a), for invertible a.
template <typename Scalar>
PolarFactors<Scalar> polar(const DenseMatrix<Scalar>& a) {
  if (a.rows() != a.cols()) throw DimensionMismatchError("matrix is not square");
  DenseMatrix<Scalar> gram = DenseMatrix<Scalar>(a.adjoint() * a);
  auto eig = detail::hermitian_eigen(require_hermitian(gram));
  double lam_max = eig.values.maxCoeff();
  double sigma_min = std::sqrt(std::max(eig.values.minCoeff(), 0.0));
  if (lam_max <= 0.0 || sigma_min < kRankTolScale * std::sqrt(lam_max))
    throw SingularError("smallest singular value below rank tolerance");
  Vector roots = eig.values.array().sqrt();
  Vector inv_roots = roots.array().inverse();
  PolarFactors<Scalar> out;
  out.s_factor = eig.vectors * roots.asDiagonal() * eig.vectors.adjoint();
  out.q_factor = a * (eig.vectors * inv_roots.asDiagonal() * eig.vectors.adjoint());
  return out;
}

template <typename Scalar>
struct SvdFactors {
  DenseMatrix<Scalar> u;
  Vector sigma;  // nonincreasing
  DenseMatrix<Scalar> v;
};

template <typename Scalar>
SvdFactors<Scalar> svd_factors(const DenseMatrix<Scalar>& a) {
  Eigen::JacobiSVD<DenseMatrix<Scalar>> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

// Sum of singular values.
template <typename Scalar>
double nuclear_norm(const DenseMatrix<Scalar>& a) {
  Eigen::JacobiSVD<DenseMatrix<Scalar>> svd(a);
  return svd.singularValues().sum();
}

struct OneSidedSlopes {
  double left;
  double right;
};

namespace detail {

// Richardson extrapolation of secant slopes s(h) = s + c1 h + c2 h^2 + ...
inline double richardson_slope(const std::vector<double>& slopes) {
  std::vector<double> table = slopes;
  size_t levels = table.size();
  for (size_t j = 1; j < levels; ++j) {
    double weight = std::pow(2.0, static_cast<double>(j));
    for (size_t i = 0; i + j < levels; ++i)
      table[i] = (weight * table[i + 1] - table[i]) / (weight - 1.0);
  }
  return table[0];
}

}  // namespace detail

// One-sided derivatives of t -> nuclear_norm(a + t b) at t = 0, estimated from
// Richardson-extrapolated secant slopes on a geometric step sequence.
inline OneSidedSlopes g_one_sided_derivatives(const Matrix& a, const Matrix& b, double h0 = 1e-3,
                                              int levels = 6) {
  double base = nuclear_norm<double>(a);
  std::vector<double> right(levels), left(levels);
  for (int i = 0; i < levels; ++i) {
    double h = h0 / std::pow(2.0, i);
    right[i] = (nuclear_norm<double>(Matrix(a + h * b)) - base) / h;
    left[i] = (nuclear_norm<double>(Matrix(a - h * b)) - base) / (-h);
  }
  return {detail::richardson_slope(left), detail::richardson_slope(right)};
}

}  // namespace cutloci

#endif
