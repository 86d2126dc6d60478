#ifndef CUTLOCI_SERIALIZATION_HPP
#define CUTLOCI_SERIALIZATION_HPP

#include <complex>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "cutloci/errors.hpp"
#include "cutloci/gradient_flow.hpp"
#include "cutloci/matrix_functions.hpp"

namespace cutloci {

using Json = nlohmann::json;

// Schema: {"rows": r, "cols": c, "real": [row-major], "imag": [row-major]?}.
// nlohmann prints doubles in shortest round-trip form, so emitted values
// re-parse bit-exactly.

inline Json matrix_to_json(const Matrix& m) {
  Json j;
  j["rows"] = static_cast<int>(m.rows());
  j["cols"] = static_cast<int>(m.cols());
  Json real = Json::array();
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c) real.push_back(m(r, c));
  j["real"] = std::move(real);
  return j;
}

inline Json cmatrix_to_json(const CMatrix& m) {
  Json j;
  j["rows"] = static_cast<int>(m.rows());
  j["cols"] = static_cast<int>(m.cols());
  Json real = Json::array(), imag = Json::array();
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c) {
      real.push_back(m(r, c).real());
      imag.push_back(m(r, c).imag());
    }
  j["real"] = std::move(real);
  j["imag"] = std::move(imag);
  return j;
}

namespace detail {

inline void check_matrix_fields(const Json& j, int& rows, int& cols) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("real"))
    throw Error("matrix JSON needs rows, cols, real");
  if (!j["rows"].is_number_integer() || !j["cols"].is_number_integer())
    throw Error("matrix dimensions must be integers");
  rows = j["rows"].get<int>();
  cols = j["cols"].get<int>();
  if (rows < 1 || cols < 1) throw Error("matrix dimensions must be positive");
  if (!j["real"].is_array() || static_cast<int>(j["real"].size()) != rows * cols)
    throw Error("real entries must be an array of rows*cols numbers");
}

inline void fill_from_array(const Json& arr, int rows, int cols,
                            const std::function<void(int, int, double)>& set) {
  int idx = 0;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c, ++idx) {
      if (!arr[idx].is_number()) throw Error("matrix entries must be numbers");
      set(r, c, arr[idx].get<double>());
    }
}

}  // namespace detail

inline Matrix matrix_from_json(const Json& j) {
  int rows = 0, cols = 0;
  detail::check_matrix_fields(j, rows, cols);
  Matrix m(rows, cols);
  detail::fill_from_array(j["real"], rows, cols, [&](int r, int c, double v) { m(r, c) = v; });
  return m;
}

inline CMatrix cmatrix_from_json(const Json& j) {
  int rows = 0, cols = 0;
  detail::check_matrix_fields(j, rows, cols);
  CMatrix m = CMatrix::Zero(rows, cols);
  detail::fill_from_array(j["real"], rows, cols,
                          [&](int r, int c, double v) { m(r, c) = std::complex<double>(v, 0.0); });
  if (j.contains("imag")) {
    if (!j["imag"].is_array() || static_cast<int>(j["imag"].size()) != rows * cols)
      throw Error("imag entries must be an array of rows*cols numbers");
    detail::fill_from_array(j["imag"], rows, cols, [&](int r, int c, double v) {
      m(r, c) += std::complex<double>(0.0, v);
    });
  }
  return m;
}

inline Json vector_to_json(const Vector& v) {
  Matrix m(v.size(), 1);
  m.col(0) = v;
  return matrix_to_json(m);
}

inline Json trajectory_to_json(const Trajectory& traj) {
  Json j;
  j["times"] = traj.times;
  Json pts = Json::array();
  for (const auto& p : traj.points) pts.push_back(vector_to_json(p));
  j["points"] = std::move(pts);
  return j;
}

inline Trajectory trajectory_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("times") || !j.contains("points"))
    throw Error("trajectory JSON needs times and points");
  Trajectory traj;
  traj.times = j["times"].get<std::vector<double>>();
  for (const auto& pj : j["points"]) {
    Matrix m = matrix_from_json(pj);
    if (m.cols() != 1) throw Error("trajectory points must be column vectors");
    traj.points.push_back(m.col(0));
  }
  return traj;
}

// Shortest round-trip decimal form of a double, shared by CSV and report
// output so all emitters agree byte for byte.
inline std::string format_double(double x) { return Json(x).dump(); }

}  // namespace cutloci

#endif
