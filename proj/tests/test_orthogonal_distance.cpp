#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "cutloci/orthogonal_distance.hpp"
#include "cutloci/random.hpp"

using namespace cutloci;

namespace {

Matrix fixed_a3() {
  Matrix a(3, 3);
  a << 1.0, 2.0, 0.0, 0.0, 3.0, 1.0, 1.0, 0.0, 1.0;
  return a;
}

}  // namespace

TEST_CASE("dist_sq_to_on matches the frozen value on a fixed matrix") {
  CHECK(std::abs(dist_sq_to_on(fixed_a3()) - 7.784356119420044) < 1e-11);
}

TEST_CASE("nearest_orthogonal matches the frozen polar factor") {
  Matrix p = nearest_orthogonal(fixed_a3());
  const double expect[9] = {0.6924295803669726,  0.5685433087620887, -0.4441844012284478,
                            -0.3370505969321265, 0.7992480609949731, 0.4975936415424481,
                            0.6379170567875699,  -0.19483593882452355, 0.745050861083894};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) CHECK(std::abs(p(r, c) - expect[3 * r + c]) < 1e-12);
  CHECK((p.transpose() * p - Matrix::Identity(3, 3)).norm() < 1e-13);
  CHECK((fixed_a3() - p).squaredNorm() == Catch::Approx(dist_sq_to_on(fixed_a3())).margin(1e-11));
}

TEST_CASE("distance is bi-invariant under orthogonal factors") {
  Rng rng(21);
  for (int i = 0; i < 30; ++i) {
    Matrix a = gaussian_matrix(3, 3, rng);
    Matrix u = haar_orthogonal(3, rng);
    Matrix v = haar_orthogonal(3, rng);
    CHECK(std::abs(dist_sq_to_on(Matrix(u * a * v)) - dist_sq_to_on(a)) < 1e-10);
  }
}

TEST_CASE("grad_dist_sq matches directional finite differences and vanishes on the group") {
  Rng rng(22);
  for (int i = 0; i < 10; ++i) {
    Matrix a = random_invertible(3, 0.3, rng);
    Matrix e = gaussian_matrix(3, 3, rng);
    e /= e.norm();
    double eps = 1e-6;
    double fd = (dist_sq_to_on(Matrix(a + eps * e)) - dist_sq_to_on(Matrix(a - eps * e))) / (2 * eps);
    CHECK(std::abs(fd - (grad_dist_sq(a).array() * e.array()).sum()) < 1e-6);
  }
  Matrix q = haar_orthogonal(3, rng);
  CHECK(grad_dist_sq(q).norm() < 1e-12);
}

TEST_CASE("hessian_normal_block is twice the identity at orthogonal points") {
  Rng rng(23);
  for (int n : {2, 3}) {
    int dim = n * (n + 1) / 2;
    for (int i = 0; i < 20; ++i) {
      Matrix q = haar_orthogonal(n, rng);
      Matrix h = hessian_normal_block(q);
      REQUIRE(h.rows() == dim);
      CHECK((h - 2.0 * Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff() < 1e-5);
    }
  }
}

TEST_CASE("flow_closed_form matches frozen values and decreases the objective") {
  Matrix g1 = flow_closed_form(fixed_a3(), 1.0);
  const double expect[9] = {0.7340547102232121,  0.7622699055117159, -0.3840705794789106,
                            -0.2914357589312478, 1.0970874479937431, 0.565586948364176,
                            0.6869196544623705,  -0.1684677618590353, 0.7795544750100357};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) CHECK(std::abs(g1(r, c) - expect[3 * r + c]) < 1e-12);
  CHECK((flow_closed_form(fixed_a3(), 0.0) - fixed_a3()).norm() < 1e-14);
  double prev = dist_sq_to_on(fixed_a3());
  for (double t : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    double cur = dist_sq_to_on(flow_closed_form(fixed_a3(), t));
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("flow satisfies its own differential equation") {
  Rng rng(24);
  for (int i = 0; i < 20; ++i) {
    Matrix a = random_invertible(3, 0.2, rng);
    for (double t : {0.1, 1.0}) CHECK(flow_ode_residual(a, t) < 1e-7);
  }
}

TEST_CASE("linear_retraction interpolates from the matrix to its projection") {
  Matrix a = fixed_a3();
  CHECK((linear_retraction(a, 0.0) - a).norm() == 0.0);
  CHECK((linear_retraction(a, 1.0) - nearest_orthogonal(a)).norm() < 1e-14);
  Matrix mid = linear_retraction(a, 0.5);
  CHECK((mid - 0.5 * (a + nearest_orthogonal(a))).norm() < 1e-14);
}

TEST_CASE("equidistant set of a corank-one matrix has exactly two members") {
  Rng rng(25);
  Matrix u = haar_orthogonal(3, rng);
  Matrix v = haar_orthogonal(3, rng);
  Vector sv(3);
  sv << 2.0, 1.0, 0.0;
  Matrix a = u * sv.asDiagonal() * v.transpose();
  auto desc = equidistant_set_singular(a);
  CHECK(desc.rank == 2);
  Matrix plus(1, 1), minus(1, 1);
  plus << 1.0;
  minus << -1.0;
  Matrix m1 = desc.member(plus);
  Matrix m2 = desc.member(minus);
  // the square root is not Lipschitz at zero, so the distance to an exactly
  // singular matrix carries sqrt(machine eps) noise
  double d = dist_sq_to_on(a);
  CHECK(std::abs((a - m1).squaredNorm() - d) < 1e-7);
  CHECK(std::abs((a - m2).squaredNorm() - d) < 1e-7);
  CHECK((m1 - m2).norm() > 0.1);
}

TEST_CASE("every draw from a corank-two equidistant set is a minimizer") {
  Rng rng(26);
  Matrix u = haar_orthogonal(3, rng);
  Matrix v = haar_orthogonal(3, rng);
  Vector sv(3);
  sv << 1.5, 0.0, 0.0;
  Matrix a = u * sv.asDiagonal() * v.transpose();
  auto desc = equidistant_set_singular(a);
  CHECK(desc.rank == 1);
  double d = dist_sq_to_on(a);
  for (int i = 0; i < 20; ++i) {
    Matrix m = desc.draw(rng);
    CHECK(std::abs((a - m).squaredNorm() - d) < 1e-7);
    CHECK((m.transpose() * m - Matrix::Identity(3, 3)).norm() < 1e-10);
  }
}

TEST_CASE("equidistant_set_singular rejects invertible input") {
  Rng rng(27);
  CHECK_THROWS_AS(equidistant_set_singular(random_invertible(3, 0.5, rng)), FullRankError);
}

TEST_CASE("brute force search agrees with the closed form") {
  Rng rng(28);
  for (int i = 0; i < 5; ++i) {
    Matrix a = gaussian_matrix(2, 2, rng);
    CHECK(std::abs(dist_sq_to_on(a) - brute_force_dist_sq(a, 5000, rng())) < 1e-4);
  }
}
