#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "cutloci/matrix_functions.hpp"
#include "cutloci/random.hpp"

using namespace cutloci;

namespace {

Matrix fixed_a2() {
  Matrix a(2, 2);
  a << 4.0, 1.0, 1.0, 3.0;
  return a;
}

Matrix fixed_a3() {
  Matrix a(3, 3);
  a << 1.0, 2.0, 0.0, 0.0, 3.0, 1.0, 1.0, 0.0, 1.0;
  return a;
}

}  // namespace

TEST_CASE("sqrt_pd matches frozen values on a fixed SPD matrix") {
  Matrix s = sqrt_pd<double>(fixed_a2());
  CHECK(std::abs(s(0, 0) - 1.9815776331353152) < 1e-12);
  CHECK(std::abs(s(0, 1) - 0.2708322060941793) < 1e-12);
  CHECK(std::abs(s(1, 0) - 0.2708322060941793) < 1e-12);
  CHECK(std::abs(s(1, 1) - 1.710745427041136) < 1e-12);
}

TEST_CASE("sqrt_pd squares back to the input") {
  Rng rng(11);
  for (int i = 0; i < 50; ++i) {
    Matrix a = random_spd(3, 0.2, 5.0, rng);
    Matrix s = sqrt_pd<double>(a);
    CHECK((s * s - a).norm() < 1e-11);
    CHECK((s - s.transpose()).norm() < 1e-12);
  }
}

TEST_CASE("sqrt_pd rejects bad inputs") {
  Matrix asym(2, 2);
  asym << 1.0, 2.0, 0.0, 1.0;
  CHECK_THROWS_AS(sqrt_pd<double>(asym), NotSymmetricError);
  Matrix neg(2, 2);
  neg << 1.0, 0.0, 0.0, -2.0;
  CHECK_THROWS_AS(sqrt_pd<double>(neg), NotPositiveDefiniteError);
}

TEST_CASE("sqrt_psd handles singular positive semidefinite input") {
  Vector v(3);
  v << 1.0, -2.0, 0.5;
  Matrix a = v * v.transpose();
  Matrix s = sqrt_psd<double>(a);
  CHECK((s * s - a).norm() < 1e-12);
}

TEST_CASE("principal_log_eig matches frozen values and inverts the exponential") {
  Matrix lg = principal_log_eig<double>(fixed_a2());
  CHECK(std::abs(lg(0, 0) - 1.346984922338319) < 1e-12);
  CHECK(std::abs(lg(0, 1) - 0.2960745718782679) < 1e-12);
  CHECK(std::abs(lg(1, 1) - 1.050910350460051) < 1e-12);
  CHECK((matrix_exp<double>(lg) - fixed_a2()).norm() < 1e-12);
}

TEST_CASE("principal_log_gregory agrees with the eigenvalue route") {
  Rng rng(12);
  for (int i = 0; i < 20; ++i) {
    Matrix a = random_spd(3, 0.2, 5.0, rng);
    Matrix g = principal_log_gregory<double>(a);
    Matrix e = principal_log_eig<double>(a);
    CHECK((g - e).norm() < 1e-12);
  }
}

TEST_CASE("matrix_exp reproduces plane rotations and inverses") {
  double th = 0.9;
  Matrix j(2, 2);
  j << 0.0, -th, th, 0.0;
  Matrix e = matrix_exp<double>(j);
  CHECK(std::abs(e(0, 0) - std::cos(th)) < 1e-13);
  CHECK(std::abs(e(1, 0) - std::sin(th)) < 1e-13);
  CHECK((matrix_exp<double>(Matrix(Matrix::Zero(3, 3))) - Matrix::Identity(3, 3)).norm() == 0.0);
  Rng rng(13);
  for (int i = 0; i < 20; ++i) {
    Matrix g = gaussian_matrix(3, 3, rng);
    Matrix s = (g + g.transpose()) / 2.0;
    CHECK((matrix_exp<double>(s) * matrix_exp<double>(Matrix(-s)) - Matrix::Identity(3, 3)).norm() <
          1e-12);
  }
}

TEST_CASE("frechet_sqrt matches frozen values on a fixed pair") {
  Matrix h(2, 2);
  h << 1.0, 2.0, 2.0, -1.0;
  Matrix x = frechet_sqrt<double>(fixed_a2(), h);
  CHECK(std::abs(x(0, 0) - 0.1762455943542986) < 1e-12);
  CHECK(std::abs(x(0, 1) - 0.5566386452446422) < 1e-12);
  CHECK(std::abs(x(1, 1) + 0.3803930508903436) < 1e-12);
}

TEST_CASE("frechet_sqrt satisfies the Sylvester identity") {
  Rng rng(14);
  for (int i = 0; i < 30; ++i) {
    Matrix a = random_spd(3, 0.5, 2.0, rng);
    Matrix g = gaussian_matrix(3, 3, rng);
    Matrix h = (g + g.transpose()) / 2.0;
    Matrix x = frechet_sqrt<double>(a, h);
    Matrix s = sqrt_pd<double>(a);
    CHECK((x * s + s * x - h).norm() < 1e-10);
  }
}

TEST_CASE("frechet_sqrt_quadrature value is close and its error bound is honest") {
  Rng rng(15);
  for (int i = 0; i < 10; ++i) {
    Matrix a = random_spd(3, 0.5, 2.0, rng);
    Matrix g = gaussian_matrix(3, 3, rng);
    Matrix h = (g + g.transpose()) / 2.0;
    auto quad = frechet_sqrt_quadrature<double>(a, h);
    Matrix exact = frechet_sqrt<double>(a, h);
    double err = (quad.value - exact).norm();
    CHECK(err < 1e-5);
    CHECK(err <= quad.error_bound + 1e-12);
  }
}

TEST_CASE("nuclear_norm matches the frozen singular value sum") {
  CHECK(std::abs(nuclear_norm<double>(fixed_a3()) - 6.107821940289978) < 1e-12);
}

TEST_CASE("polar factors reconstruct and the orthogonal part is orthogonal") {
  Rng rng(16);
  for (int i = 0; i < 20; ++i) {
    Matrix a = random_invertible(3, 0.2, rng);
    auto pf = polar<double>(a);
    CHECK((pf.q_factor * pf.s_factor - a).norm() < 1e-11);
    CHECK((pf.q_factor.transpose() * pf.q_factor - Matrix::Identity(3, 3)).norm() < 1e-12);
    CHECK((pf.s_factor - pf.s_factor.transpose()).norm() < 1e-12);
  }
}

TEST_CASE("svd_factors reconstruct the input") {
  Rng rng(17);
  Matrix a = gaussian_matrix(3, 3, rng);
  auto f = svd_factors<double>(a);
  CHECK((f.u * f.sigma.asDiagonal() * f.v.transpose() - a).norm() < 1e-12);
}

TEST_CASE("one-sided slope gap counts the nullity twice") {
  Matrix a = Matrix::Zero(2, 2);
  a(0, 0) = 1.0;
  Matrix b = Matrix::Zero(2, 2);
  b(1, 1) = 1.0;
  OneSidedSlopes sl = g_one_sided_derivatives(a, b);
  CHECK(std::abs(sl.right - 1.0) < 1e-10);
  CHECK(std::abs(sl.left + 1.0) < 1e-10);
  Rng rng(18);
  for (int i = 0; i < 5; ++i) {
    Matrix ai = random_invertible(3, 0.4, rng);
    Matrix bi = gaussian_matrix(3, 3, rng);
    OneSidedSlopes si = g_one_sided_derivatives(ai, bi);
    CHECK(std::abs(si.right - si.left) < 1e-6);
  }
}
