#ifndef CUTLOCI_RANDOM_HPP
#define CUTLOCI_RANDOM_HPP

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <random>

namespace cutloci {

using Rng = std::mt19937_64;

inline Eigen::MatrixXd gaussian_matrix(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = gauss(rng);
  return m;
}

inline Eigen::MatrixXcd gaussian_complex_matrix(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXcd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      double re = gauss(rng);
      double im = gauss(rng);
      m(i, j) = std::complex<double>(re, im);
    }
  return m;
}

// Haar-distributed sample from O(n): QR of a Gaussian matrix with the
// R-diagonal signs folded into Q so the distribution is exactly uniform.
inline Eigen::MatrixXd haar_orthogonal(int n, Rng& rng) {
  Eigen::MatrixXd g = gaussian_matrix(n, n, rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j)
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  return q;
}

// Stack-allocated variant for hot sampling loops.
template <int N>
Eigen::Matrix<double, N, N> haar_orthogonal_fixed(Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::Matrix<double, N, N> g;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) g(i, j) = gauss(rng);
  Eigen::HouseholderQR<Eigen::Matrix<double, N, N>> qr(g);
  Eigen::Matrix<double, N, N> q = qr.householderQ();
  Eigen::Matrix<double, N, N> r = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (int j = 0; j < N; ++j)
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  return q;
}

// Haar sample from SO(n): flip one column sign if the determinant is -1.
inline Eigen::MatrixXd haar_special_orthogonal(int n, Rng& rng) {
  Eigen::MatrixXd q = haar_orthogonal(n, rng);
  if (q.determinant() < 0.0) q.col(0) *= -1.0;
  return q;
}

// Symmetric positive definite matrix with eigenvalues in [lo, hi].
inline Eigen::MatrixXd random_spd(int n, double lo, double hi, Rng& rng) {
  Eigen::MatrixXd q = haar_orthogonal(n, rng);
  std::uniform_real_distribution<double> unif(lo, hi);
  Eigen::VectorXd lam(n);
  for (int i = 0; i < n; ++i) lam(i) = unif(rng);
  return q * lam.asDiagonal() * q.transpose();
}

// Invertible matrix whose smallest singular value is at least min_sigma.
inline Eigen::MatrixXd random_invertible(int n, double min_sigma, Rng& rng) {
  for (;;) {
    Eigen::MatrixXd a = gaussian_matrix(n, n, rng);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
    if (svd.singularValues()(n - 1) >= min_sigma) return a;
  }
}

// Invertible matrix with positive determinant.
inline Eigen::MatrixXd random_gl_plus(int n, double min_sigma, Rng& rng) {
  Eigen::MatrixXd a = random_invertible(n, min_sigma, rng);
  if (a.determinant() < 0.0) a.col(0) *= -1.0;
  return a;
}

inline Eigen::VectorXd random_unit_vector(int n, Rng& rng) {
  for (;;) {
    Eigen::VectorXd v = gaussian_matrix(n, 1, rng);
    double norm = v.norm();
    if (norm > 1e-12) return v / norm;
  }
}

}  // namespace cutloci

#endif
