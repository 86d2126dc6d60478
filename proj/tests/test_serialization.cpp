#include <catch2/catch_amalgamated.hpp>

#include <complex>

#include "cutloci/random.hpp"
#include "cutloci/serialization.hpp"

using namespace cutloci;

TEST_CASE("real matrices survive a JSON round trip bit for bit") {
  Rng rng(11);
  Matrix a = gaussian_matrix(3, 4, rng);
  a(0, 0) = 0.1;  // not exactly representable, stresses the printer
  a(1, 2) = 1.0 / 3.0;
  Json j = matrix_to_json(a);
  std::string text = j.dump();
  Matrix b = matrix_from_json(Json::parse(text));
  REQUIRE(b.rows() == 3);
  REQUIRE(b.cols() == 4);
  CHECK(b == a);
}

TEST_CASE("complex matrices round trip and accept a missing imag block") {
  Rng rng(12);
  CMatrix a(2, 2);
  a << std::complex<double>(0.1, -0.7), std::complex<double>(2.0, 0.3),
      std::complex<double>(-1.5, 1e-17), std::complex<double>(4.0, -2.0);
  CMatrix b = cmatrix_from_json(Json::parse(cmatrix_to_json(a).dump()));
  CHECK(b == a);

  Json real_only = matrix_to_json(Matrix::Identity(2, 2));
  CMatrix c = cmatrix_from_json(real_only);
  CHECK(c == CMatrix::Identity(2, 2));
}

TEST_CASE("malformed matrix JSON is rejected") {
  CHECK_THROWS_AS(matrix_from_json(Json::parse("[1,2,3]")), Error);
  CHECK_THROWS_AS(matrix_from_json(Json::parse(R"({"rows":2,"cols":2})")), Error);
  CHECK_THROWS_AS(matrix_from_json(Json::parse(R"({"rows":2,"cols":2,"real":[1,2,3]})")), Error);
  CHECK_THROWS_AS(matrix_from_json(Json::parse(R"({"rows":0,"cols":2,"real":[]})")), Error);
  CHECK_THROWS_AS(matrix_from_json(Json::parse(R"({"rows":1.5,"cols":2,"real":[1,2,3]})")), Error);
  CHECK_THROWS_AS(matrix_from_json(Json::parse(R"({"rows":1,"cols":2,"real":[1,"x"]})")), Error);
  CHECK_THROWS_AS(
      cmatrix_from_json(Json::parse(R"({"rows":1,"cols":1,"real":[1],"imag":[1,2]})")), Error);
}

TEST_CASE("trajectories round trip") {
  Trajectory t;
  t.times = {0.0, 0.25, 1.0};
  for (double s : t.times) {
    Vector p(3);
    p << std::exp(-s), 0.1 * s, -s;
    t.points.push_back(p);
  }
  Trajectory back = trajectory_from_json(Json::parse(trajectory_to_json(t).dump()));
  REQUIRE(back.times == t.times);
  REQUIRE(back.points.size() == t.points.size());
  for (std::size_t i = 0; i < t.points.size(); ++i) CHECK(back.points[i] == t.points[i]);
  CHECK_THROWS_AS(trajectory_from_json(Json::parse(R"({"times":[0]})")), Error);
}

TEST_CASE("doubles print in shortest round-trip form") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1.0");
  CHECK(format_double(-3.5e-9) == "-3.5e-09");
  double third = 1.0 / 3.0;
  CHECK(Json::parse(format_double(third)).get<double>() == third);
}
