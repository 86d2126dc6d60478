#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "cutloci/indefinite_unitary.hpp"
#include "cutloci/random.hpp"

using namespace cutloci;
using Cplx = std::complex<double>;

namespace {

CMatrix boost11(double r) {
  CMatrix a(2, 2);
  a << std::cosh(r), std::sinh(r), std::sinh(r), std::cosh(r);
  return a;
}

const std::vector<Signature> kSigs = {{1, 1}, {2, 1}, {2, 2}};

}  // namespace

TEST_CASE("signature matrix and membership on a hyperbolic rotation") {
  Signature sig{1, 1};
  CMatrix j = signature_matrix(sig);
  CHECK(j(0, 0) == Cplx(1.0, 0.0));
  CHECK(j(1, 1) == Cplx(-1.0, 0.0));
  MembershipResult res = is_upq(boost11(0.7), sig);
  CHECK(res.in_group);
  CHECK(res.residual < 1e-14);
  CMatrix junk = CMatrix::Identity(2, 2) * Cplx(2.0, 0.0);
  CHECK_FALSE(is_upq(junk, sig).in_group);
  CHECK_THROWS_AS(make_upq(junk, sig), NotInGroupError);
}

TEST_CASE("group closure and inverse reciprocity") {
  Rng rng(41);
  for (const Signature& sig : kSigs) {
    for (int i = 0; i < 10; ++i) {
      UpqElement a = random_upq(sig, rng());
      UpqElement b = random_upq(sig, rng());
      CHECK(is_upq(a.mat * b.mat, sig).in_group);
      UpqElement ai = upq_inverse(a);
      CHECK((ai.mat * a.mat - CMatrix::Identity(sig.n(), sig.n())).norm() < 1e-12);
      UpqElement bi = upq_inverse(b);
      UpqElement ab = make_upq(a.mat * b.mat, sig);
      CHECK((upq_inverse(ab).mat - bi.mat * ai.mat).norm() < 1e-12);
    }
  }
}

TEST_CASE("lie algebra splits into compact and symmetric parts") {
  Rng rng(42);
  Signature sig{2, 1};
  CMatrix gp = gaussian_complex_matrix(2, 2, rng);
  CMatrix gq = gaussian_complex_matrix(1, 1, rng);
  CMatrix b = gaussian_complex_matrix(2, 1, rng);
  CMatrix x = CMatrix::Zero(3, 3);
  x.topLeftCorner(2, 2) = (gp - gp.adjoint()) / 2.0;
  x.bottomRightCorner(1, 1) = (gq - gq.adjoint()) / 2.0;
  x.topRightCorner(2, 1) = b;
  x.bottomLeftCorner(1, 2) = b.adjoint();
  UpqLieElement el = split_lie_algebra(x, sig);
  CHECK((el.k_part + el.n_part - x).norm() < 1e-14);
  CHECK((el.k_part + el.k_part.adjoint()).norm() < 1e-14);
  CHECK((el.n_part - el.n_part.adjoint()).norm() < 1e-14);
  CHECK(el.n_part.topLeftCorner(2, 2).norm() == 0.0);
  CMatrix bad = CMatrix::Identity(3, 3);
  CHECK_THROWS_AS(split_lie_algebra(bad, sig), NotInAlgebraError);
}

TEST_CASE("polar factorization has block-diagonal unitary and anti-diagonal log") {
  Rng rng(43);
  for (const Signature& sig : kSigs) {
    int p = sig.p, n = sig.n();
    for (int i = 0; i < 8; ++i) {
      UpqElement a = random_upq(sig, rng());
      UpqPolar pol = polar_upq(a);
      CHECK(pol.u.mat.topRightCorner(p, n - p).norm() < 1e-10);
      CHECK(pol.u.mat.bottomLeftCorner(n - p, p).norm() < 1e-10);
      CHECK((pol.u.mat.adjoint() * pol.u.mat - CMatrix::Identity(n, n)).norm() < 1e-10);
      CHECK((pol.y - pol.y.adjoint()).norm() < 1e-12);
      CHECK(pol.y.topLeftCorner(p, p).norm() < 1e-12);
      CHECK((pol.u.mat * matrix_exp<Cplx>(pol.y) - a.mat).norm() < 1e-9);
    }
  }
}

TEST_CASE("block inverse matches the frozen value and the direct inverse") {
  Signature sig{1, 1};
  UpqElement a = make_upq(boost11(0.7), sig);
  CMatrix bi = block_inverse(a);
  CHECK(std::abs(bi(0, 0).real() - 0.5) < 1e-13);
  CHECK(std::abs(bi(0, 1).real() + 0.30218388855858175) < 1e-13);
  CHECK(std::abs(bi(1, 0).real() + 0.30218388855858175) < 1e-13);
  CHECK(std::abs(bi(1, 1).real() - 0.5) < 1e-13);
  Rng rng(44);
  for (const Signature& s : kSigs) {
    UpqElement el = random_upq(s, rng());
    CMatrix gram_plus = el.mat.adjoint() * el.mat + CMatrix::Identity(s.n(), s.n());
    CHECK((block_inverse(el) - gram_plus.inverse()).norm() < 1e-11);
  }
}

TEST_CASE("closed-form exponential of the symmetric part matches the series") {
  Rng rng(45);
  for (const Signature& sig : kSigs) {
    int p = sig.p, q = sig.q, n = sig.n();
    for (int i = 0; i < 8; ++i) {
      CMatrix b = gaussian_complex_matrix(p, q, rng);
      CMatrix y = CMatrix::Zero(n, n);
      y.topRightCorner(p, q) = b;
      y.bottomLeftCorner(q, p) = b.adjoint();
      CHECK((exp_n_closed_form(y, sig) - matrix_exp<Cplx>(y)).norm() < 1e-11);
      // A nonzero direction can never exponentiate to a block-diagonal matrix.
      CHECK(exp_n_closed_form(y, sig).topRightCorner(p, q).norm() >= b.norm() - 1e-12);
    }
    CMatrix zero = CMatrix::Zero(n, n);
    CHECK((exp_n_closed_form(zero, sig) - CMatrix::Identity(n, n)).norm() == 0.0);
    CMatrix bad = CMatrix::Identity(n, n);
    CHECK_THROWS_AS(exp_n_closed_form(bad, sig), NotNPartError);
  }
}

TEST_CASE("squared distance grows as twice the squared rank-one parameter") {
  for (const Signature& sig : kSigs) {
    int p = sig.p, n = sig.n();
    for (double r : {0.1, 1.0, 3.0}) {
      CMatrix y = CMatrix::Zero(n, n);
      y(0, p) = r;
      y(p, 0) = r;
      UpqElement el = make_upq(exp_n_closed_form(y, sig), sig);
      CHECK(std::abs(dist_sq_upq(el) - 2.0 * r * r) < 1e-9);
    }
  }
}

TEST_CASE("distance is invariant under the compact factor and zero on it") {
  Rng rng(46);
  Signature sig{1, 1};
  CMatrix u = CMatrix::Zero(2, 2);
  u(0, 0) = std::exp(Cplx(0.0, 0.4));
  u(1, 1) = std::exp(Cplx(0.0, -1.1));
  CHECK(dist_sq_upq(make_upq(u, sig)) < 1e-15);
  UpqElement a = random_upq(sig, rng());
  CHECK(std::abs(dist_sq_upq(make_upq(u * a.mat, sig)) - dist_sq_upq(a)) < 1e-10);
}

TEST_CASE("exponential roundtrip recovers every sampled element") {
  Rng rng(47);
  for (const Signature& sig : kSigs) {
    for (int i = 0; i < 8; ++i) {
      UpqElement a = random_upq(sig, rng());
      SurjectivityReport rep = exp_surjectivity_roundtrip(a);
      CHECK(rep.reconstruction_residual < 1e-9);
      CHECK(rep.z_algebra_residual < 1e-10);
      CHECK(rep.y_npart_residual < 1e-10);
    }
  }
}

TEST_CASE("roundtrip refuses a compact factor at the phase boundary") {
  Signature sig{1, 1};
  CMatrix u = CMatrix::Identity(2, 2);
  u(0, 0) = Cplx(-1.0, 0.0);
  CMatrix y = CMatrix::Zero(2, 2);
  y(0, 1) = 0.3;
  y(1, 0) = 0.3;
  UpqElement a = make_upq(u * exp_n_closed_form(y, sig), sig);
  CHECK_THROWS_AS(exp_surjectivity_roundtrip(a), PhaseBoundaryError);
}

TEST_CASE("gregory log inside polar agrees with the eigenvalue log") {
  Rng rng(48);
  for (int i = 0; i < 10; ++i) {
    UpqElement a = random_upq(Signature{2, 2}, rng());
    CMatrix gram = a.mat.adjoint() * a.mat;
    CHECK((principal_log_gregory<Cplx>(gram) - principal_log_eig<Cplx>(gram)).norm() < 1e-11);
  }
}
