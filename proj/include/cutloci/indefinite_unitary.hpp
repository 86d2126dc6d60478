#ifndef CUTLOCI_INDEFINITE_UNITARY_HPP
#define CUTLOCI_INDEFINITE_UNITARY_HPP

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>

#include "cutloci/errors.hpp"
#include "cutloci/matrix_functions.hpp"
#include "cutloci/random.hpp"

namespace cutloci {

struct Signature {
  int p = 1;
  int q = 1;
  int n() const { return p + q; }
};

// The defining form diag(I_p, -I_q).
inline CMatrix signature_matrix(const Signature& sig) {
  CMatrix j = CMatrix::Identity(sig.n(), sig.n());
  for (int i = sig.p; i < sig.n(); ++i) j(i, i) = -1.0;
  return j;
}

struct MembershipResult {
  bool in_group = false;
  double residual = 0.0;  // ||m* J m - J||_F
};

inline MembershipResult is_upq(const CMatrix& m, const Signature& sig, double tol = 1e-9) {
  if (m.rows() != sig.n() || m.cols() != sig.n())
    throw DimensionMismatchError("matrix size does not match signature");
  CMatrix j = signature_matrix(sig);
  double residual = (m.adjoint() * j * m - j).norm();
  return {residual <= tol, residual};
}

struct UpqElement {
  CMatrix mat;
  Signature sig;
};

inline UpqElement make_upq(const CMatrix& m, const Signature& sig, double tol = 1e-9) {
  auto check = is_upq(m, sig, tol);
  if (!check.in_group)
    throw NotInGroupError("form-preservation residual " + std::to_string(check.residual));
  return {m, sig};
}

namespace detail {

inline void require_member(const UpqElement& a, double tol = 1e-8) {
  auto check = is_upq(a.mat, a.sig, tol);
  if (!check.in_group)
    throw NotInGroupError("form-preservation residual " + std::to_string(check.residual));
}

}  // namespace detail

// Group inverse without a linear solve: J a* J.
inline UpqElement upq_inverse(const UpqElement& a) {
  detail::require_member(a);
  CMatrix j = signature_matrix(a.sig);
  return {CMatrix(j * a.mat.adjoint() * j), a.sig};
}

struct UpqLieElement {
  CMatrix mat;
  Signature sig;
  CMatrix k_part;  // block diagonal, blocks skew-Hermitian
  CMatrix n_part;  // block anti-diagonal, off blocks mutually adjoint
};

// Splits x in the Lie algebra into its block-diagonal and block-anti-diagonal
// parts; these are the compact part and its orthogonal complement.
inline UpqLieElement split_lie_algebra(const CMatrix& x, const Signature& sig) {
  if (x.rows() != sig.n() || x.cols() != sig.n())
    throw DimensionMismatchError("matrix size does not match signature");
  CMatrix j = signature_matrix(sig);
  double defect = (x.adjoint() * j + j * x).norm();
  if (defect > 1e-9)
    throw NotInAlgebraError("algebra-relation residual " + std::to_string(defect));
  int p = sig.p, q = sig.q;
  CMatrix k = CMatrix::Zero(sig.n(), sig.n());
  CMatrix n = CMatrix::Zero(sig.n(), sig.n());
  k.topLeftCorner(p, p) = x.topLeftCorner(p, p);
  k.bottomRightCorner(q, q) = x.bottomRightCorner(q, q);
  n.topRightCorner(p, q) = x.topRightCorner(p, q);
  n.bottomLeftCorner(q, p) = x.bottomLeftCorner(q, p);
  return {x, sig, k, n};
}

struct UpqPolar {
  UpqElement u;  // block-diagonal unitary factor
  CMatrix y;     // block-anti-diagonal, exp(y) is the positive factor
};

// Factorization a = u exp(y) with y = (1/2) log(a* a) computed by the series
// logarithm; u then lands in the block-diagonal unitary subgroup.
inline UpqPolar polar_upq(const UpqElement& a) {
  detail::require_member(a);
  CMatrix gram = a.mat.adjoint() * a.mat;
  CMatrix y = 0.5 * principal_log_gregory<std::complex<double>>(gram);
  CMatrix u = a.mat * matrix_exp<std::complex<double>>(CMatrix(-y));
  return {UpqElement{u, a.sig}, y};
}

// Closed-form inverse of a* a + I from the block structure of a:
//   (1/2) [[I, -A^{-1}B], [-(A^{-1}B)*, I]].
inline CMatrix block_inverse(const UpqElement& a) {
  detail::require_member(a);
  int p = a.sig.p, q = a.sig.q;
  CMatrix ablock = a.mat.topLeftCorner(p, p);
  CMatrix bblock = a.mat.topRightCorner(p, q);
  Eigen::FullPivLU<CMatrix> lu(ablock);
  lu.setThreshold(1e-12);
  if (!lu.isInvertible()) throw BlockSingularError("top-left block is singular");
  CMatrix ainv_b = lu.solve(bblock);
  CMatrix out = CMatrix::Zero(a.sig.n(), a.sig.n());
  out.topLeftCorner(p, p) = CMatrix::Identity(p, p);
  out.bottomRightCorner(q, q) = CMatrix::Identity(q, q);
  out.topRightCorner(p, q) = -ainv_b;
  out.bottomLeftCorner(q, p) = -ainv_b.adjoint();
  return 0.5 * out;
}

namespace detail {

inline void require_n_part(const CMatrix& y, const Signature& sig) {
  if (y.rows() != sig.n() || y.cols() != sig.n())
    throw DimensionMismatchError("matrix size does not match signature");
  int p = sig.p, q = sig.q;
  double scale = 1.0 + y.norm();
  if (y.topLeftCorner(p, p).norm() > 1e-10 * scale ||
      y.bottomRightCorner(q, q).norm() > 1e-10 * scale)
    throw NotNPartError("diagonal blocks are not zero");
  if ((y.bottomLeftCorner(q, p) - y.topRightCorner(p, q).adjoint()).norm() > 1e-10 * scale)
    throw NotNPartError("off-diagonal blocks are not mutually adjoint");
}

}  // namespace detail

// exp of [[0, B], [B*, 0]] assembled from the SVD B = U S V*: the blocks are
// U cosh(S) U*, U sinh(S) V*, V sinh(S) U*, V cosh(S) V*, with cosh acting as
// the identity on the kernels (full SVD supplies the padding).
inline CMatrix exp_n_closed_form(const CMatrix& y, const Signature& sig) {
  detail::require_n_part(y, sig);
  int p = sig.p, q = sig.q;
  CMatrix b = y.topRightCorner(p, q);
  Eigen::JacobiSVD<CMatrix> svd(b, Eigen::ComputeFullU | Eigen::ComputeFullV);
  CMatrix u = svd.matrixU();
  CMatrix v = svd.matrixV();
  Vector sigma = svd.singularValues();
  int r = static_cast<int>(sigma.size());
  Vector cosh_p = Vector::Ones(p), cosh_q = Vector::Ones(q);
  for (int i = 0; i < r; ++i) {
    cosh_p(i) = std::cosh(sigma(i));
    cosh_q(i) = std::cosh(sigma(i));
  }
  CMatrix sinh_pq = CMatrix::Zero(p, q);
  for (int i = 0; i < r; ++i) sinh_pq(i, i) = std::sinh(sigma(i));
  CMatrix out(sig.n(), sig.n());
  out.topLeftCorner(p, p) = u * cosh_p.asDiagonal() * u.adjoint();
  out.bottomRightCorner(q, q) = v * cosh_q.asDiagonal() * v.adjoint();
  out.topRightCorner(p, q) = u * sinh_pq * v.adjoint();
  out.bottomLeftCorner(q, p) = v * sinh_pq.adjoint() * u.adjoint();
  return out;
}

// Squared distance from a to the block-diagonal unitary subgroup:
//   (1/4) tr( (log a* a)^2 ).
inline double dist_sq_upq(const UpqElement& a) {
  detail::require_member(a);
  CMatrix gram = a.mat.adjoint() * a.mat;
  CMatrix lg = principal_log_eig<std::complex<double>>(gram);
  return 0.25 * (lg * lg).trace().real();
}

struct SurjectivityReport {
  CMatrix z;  // block-diagonal skew-Hermitian
  CMatrix y;  // block anti-diagonal
  double reconstruction_residual = 0.0;  // ||exp(z) exp(y) - a||
  double z_algebra_residual = 0.0;       // skew-Hermitian defect of z
  double y_npart_residual = 0.0;         // diagonal-block mass of y
};

namespace detail {

// Principal log of a unitary matrix through its Schur form; eigenvalue phases
// are taken in (-pi, pi], with the branch boundary rejected.
inline CMatrix unitary_log(const CMatrix& u) {
  Eigen::ComplexSchur<CMatrix> schur(u);
  if (schur.info() != Eigen::Success) throw Error("Schur decomposition failed");
  CMatrix t = schur.matrixT();
  CMatrix q = schur.matrixU();
  Eigen::VectorXcd phases(t.rows());
  for (Eigen::Index i = 0; i < t.rows(); ++i) {
    std::complex<double> lam = t(i, i);
    if (std::abs(lam + 1.0) < 1e-10)
      throw PhaseBoundaryError("unitary eigenvalue at the log branch cut");
    phases(i) = std::complex<double>(0.0, std::arg(lam));
  }
  return q * phases.asDiagonal() * q.adjoint();
}

}  // namespace detail

// Writes a = exp(z) exp(y): y from the polar factorization, z as the per-block
// principal log of the block-diagonal unitary factor.
inline SurjectivityReport exp_surjectivity_roundtrip(const UpqElement& a) {
  UpqPolar factors = polar_upq(a);
  int p = a.sig.p, q = a.sig.q;
  CMatrix z = CMatrix::Zero(a.sig.n(), a.sig.n());
  z.topLeftCorner(p, p) = detail::unitary_log(CMatrix(factors.u.mat.topLeftCorner(p, p)));
  z.bottomRightCorner(q, q) = detail::unitary_log(CMatrix(factors.u.mat.bottomRightCorner(q, q)));
  SurjectivityReport report;
  report.z = z;
  report.y = factors.y;
  report.reconstruction_residual =
      (matrix_exp<std::complex<double>>(z) * matrix_exp<std::complex<double>>(factors.y) - a.mat)
          .norm();
  report.z_algebra_residual = (z + z.adjoint()).norm();
  double diag_mass = factors.y.topLeftCorner(p, p).norm() +
                     factors.y.bottomRightCorner(q, q).norm();
  report.y_npart_residual = diag_mass;
  return report;
}

// Deterministic sample e^Z e^Y with Z random in the compact part and Y a
// random block-anti-diagonal direction scaled to ||Y|| <= 2.
inline UpqElement random_upq(const Signature& sig, std::uint64_t seed) {
  Rng rng(seed);
  int p = sig.p, q = sig.q;
  CMatrix gp = gaussian_complex_matrix(p, p, rng);
  CMatrix gq = gaussian_complex_matrix(q, q, rng);
  CMatrix z = CMatrix::Zero(sig.n(), sig.n());
  z.topLeftCorner(p, p) = (gp - gp.adjoint()) / 2.0;
  z.bottomRightCorner(q, q) = (gq - gq.adjoint()) / 2.0;
  CMatrix b = gaussian_complex_matrix(p, q, rng);
  CMatrix y = CMatrix::Zero(sig.n(), sig.n());
  y.topRightCorner(p, q) = b;
  y.bottomLeftCorner(q, p) = b.adjoint();
  double ynorm = y.norm();
  if (ynorm > 2.0) y *= 2.0 / ynorm;
  CMatrix m = matrix_exp<std::complex<double>>(z) * matrix_exp<std::complex<double>>(y);
  return {m, sig};
}

}  // namespace cutloci

#endif
