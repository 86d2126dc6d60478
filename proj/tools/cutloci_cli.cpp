// Command line front end: distance/flow computations on matrix spaces,
// indefinite-unitary factorizations, cut-time sampling on the model cases,
// and the named verification suite. Identical argv and seed produce
// byte-identical output; nothing is read from the environment except the
// optional NO_COLOR convention for the verify table on a terminal.

#include <unistd.h>

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "cutloci/cut_time.hpp"
#include "cutloci/errors.hpp"
#include "cutloci/gradient_flow.hpp"
#include "cutloci/indefinite_unitary.hpp"
#include "cutloci/left_invariant.hpp"
#include "cutloci/matrix_functions.hpp"
#include "cutloci/model_spaces.hpp"
#include "cutloci/orthogonal_distance.hpp"
#include "cutloci/random.hpp"
#include "cutloci/serialization.hpp"
#include "cutloci/verify.hpp"

namespace {

using namespace cutloci;

struct RunConfig {
  double tol = 1e-8;
  int samples = 10000;
  std::uint64_t seed = 0;
  std::string format;  // empty means the per-command default
  std::string out;     // empty means stdout
};

std::string pick_format(const RunConfig& cfg, const std::string& fallback) {
  return cfg.format.empty() ? fallback : cfg.format;
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open input file: " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error("invalid JSON in " + path + ": " + e.what());
  }
}

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.out, std::ios::binary);
  if (!out) throw Error("cannot open output file: " + cfg.out);
  out << text;
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += "\"\"";
    else quoted += c;
  }
  quoted += "\"";
  return quoted;
}

// "start:end:count" with count >= 1; count == 1 emits just the start time.
std::vector<double> parse_t_grid(const std::string& text) {
  auto first = text.find(':');
  auto second = first == std::string::npos ? std::string::npos : text.find(':', first + 1);
  if (second == std::string::npos || text.find(':', second + 1) != std::string::npos)
    throw Error("--t-grid expects start:end:count");
  double a = 0.0, b = 0.0;
  long count = 0;
  try {
    a = std::stod(text.substr(0, first));
    b = std::stod(text.substr(first + 1, second - first - 1));
    count = std::stol(text.substr(second + 1));
  } catch (const std::exception&) {
    throw Error("--t-grid expects numeric start:end:count");
  }
  if (count < 1) throw Error("--t-grid count must be >= 1");
  if (count == 1) return {a};
  if (!(b > a)) throw Error("--t-grid needs end > start");
  std::vector<double> ts(count);
  for (long i = 0; i < count; ++i)
    ts[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1);
  return ts;
}

std::string matrix_csv(const Matrix& m) {
  std::string s;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      s += format_double(m(r, c));
      if (c + 1 < m.cols()) s += ",";
    }
    s += "\n";
  }
  return s;
}

std::string scalar_csv(const std::string& header, double value) {
  return header + "\n" + format_double(value) + "\n";
}

// Columns: t, then the point coordinates x_0..x_{d-1}.
std::string trajectory_csv(const Trajectory& tr) {
  std::string s = "t";
  Eigen::Index dim = tr.points.empty() ? 0 : tr.points.front().size();
  for (Eigen::Index i = 0; i < dim; ++i) s += ",x_" + std::to_string(i);
  s += "\n";
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    s += format_double(tr.times[i]);
    for (Eigen::Index j = 0; j < dim; ++j) s += "," + format_double(tr.points[i](j));
    s += "\n";
  }
  return s;
}

// Columns: t, then the matrix entries flattened row major as entry_0..entry_{rc-1}.
std::string matrix_trajectory_csv(const std::vector<double>& times,
                                  const std::vector<Matrix>& points) {
  std::string s = "t";
  Eigen::Index count = points.empty() ? 0 : points.front().size();
  for (Eigen::Index i = 0; i < count; ++i) s += ",entry_" + std::to_string(i);
  s += "\n";
  for (std::size_t i = 0; i < times.size(); ++i) {
    s += format_double(times[i]);
    const Matrix& m = points[i];
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c) s += "," + format_double(m(r, c));
    s += "\n";
  }
  return s;
}

Json matrix_trajectory_json(const std::vector<double>& times, const std::vector<Matrix>& points) {
  Json j;
  j["times"] = times;
  j["points"] = Json::array();
  for (const Matrix& m : points) j["points"].push_back(matrix_to_json(m));
  return j;
}

struct CaseArgs {
  int n = 2;
  int k = 1;
  double a = 2.0;
  double b = 1.0;
};

std::pair<ModelSpace, Submanifold> make_case(const std::string& name, const CaseArgs& c) {
  if (name == "equator") return {RoundSphere{c.n}, Equator{c.n, c.k}};
  if (name == "sphere-point") {
    Point p = Point::Zero(c.n + 1);
    p(0) = 1.0;
    return {RoundSphere{c.n}, SpherePoint{p}};
  }
  if (name == "clifford") return {RoundSphere{3}, LinkedCircles{}};
  if (name == "ellipse") return {EuclideanPlane{}, Ellipse{c.a, c.b}};
  throw Error("unknown case: " + name);
}

Json vector_array(const Point& v) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

int run_cut(const RunConfig& cfg, const std::string& name, const CaseArgs& ca) {
  auto [model, sub] = make_case(name, ca);
  validate_submanifold(sub);
  Rng rng(cfg.seed);
  std::vector<CutSample> rows;
  rows.reserve(cfg.samples);
  for (int i = 0; i < cfg.samples; ++i)
    rows.push_back(s_function(model, sub, sample_unit_normal(model, sub, rng), cfg.tol));
  int dim = ambient_dimension(model);
  if (pick_format(cfg, "csv") == "csv") {
    std::string s;
    for (int i = 0; i < dim; ++i) s += "base_" + std::to_string(i) + ",";
    for (int i = 0; i < dim; ++i) s += "dir_" + std::to_string(i) + ",";
    s += "s_value,cause";
    for (int i = 0; i < dim; ++i) s += ",cut_" + std::to_string(i);
    s += "\n";
    for (const CutSample& cs : rows) {
      for (int i = 0; i < dim; ++i) s += format_double(cs.normal.base(i)) + ",";
      for (int i = 0; i < dim; ++i) s += format_double(cs.normal.dir(i)) + ",";
      s += format_double(cs.s_value);
      s += ",";
      s += to_string(cs.cause);
      for (int i = 0; i < dim; ++i) s += "," + format_double(cs.cut_point(i));
      s += "\n";
    }
    emit(cfg, s);
  } else {
    Json j;
    j["samples"] = Json::array();
    for (const CutSample& cs : rows) {
      Json row;
      row["base"] = vector_array(cs.normal.base);
      row["dir"] = vector_array(cs.normal.dir);
      row["s_value"] = cs.s_value;
      row["cause"] = to_string(cs.cause);
      row["cut_point"] = vector_array(cs.cut_point);
      j["samples"].push_back(row);
    }
    emit(cfg, dump_json(j));
  }
  return 0;
}

int run_flow_case(const RunConfig& cfg, FlowKind kind, const std::string& name,
                  const CaseArgs& ca, const std::vector<double>& point_values,
                  const std::string& t_grid_text) {
  auto [model, sub] = make_case(name, ca);
  validate_submanifold(sub);
  Point q = Eigen::Map<const Eigen::VectorXd>(point_values.data(),
                                              static_cast<Eigen::Index>(point_values.size()));
  Trajectory tr = sample_trajectory(model, sub, q, parse_t_grid(t_grid_text), kind);
  if (pick_format(cfg, "json") == "json")
    emit(cfg, dump_json(trajectory_to_json(tr)));
  else
    emit(cfg, trajectory_csv(tr));
  return 0;
}

int run_verify(const RunConfig& cfg) {
  std::vector<verify::CheckResult> results = verify::run_all(cfg.seed);
  int passed = 0;
  for (const auto& r : results) passed += r.pass ? 1 : 0;
  bool all_pass = passed == static_cast<int>(results.size());
  std::string fmt = pick_format(cfg, "table");
  if (fmt == "json") {
    Json j;
    j["checks"] = Json::array();
    for (const auto& r : results)
      j["checks"].push_back({{"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
    j["passed"] = passed;
    j["total"] = results.size();
    emit(cfg, dump_json(j));
  } else if (fmt == "csv") {
    std::string s = "name,pass,detail\n";
    for (const auto& r : results)
      s += r.name + "," + (r.pass ? "1" : "0") + "," + csv_quote(r.detail) + "\n";
    emit(cfg, s);
  } else {
    bool color = cfg.out.empty() && isatty(STDOUT_FILENO) == 1 &&
                 std::getenv("NO_COLOR") == nullptr;
    const char* green = color ? "\x1b[32m" : "";
    const char* red = color ? "\x1b[31m" : "";
    const char* reset = color ? "\x1b[0m" : "";
    std::string s;
    for (const auto& r : results) {
      s += r.pass ? std::string(green) + "[PASS]" + reset : std::string(red) + "[FAIL]" + reset;
      s += " " + r.name + ": " + r.detail + "\n";
    }
    s += "passed " + std::to_string(passed) + "/" + std::to_string(results.size()) + "\n";
    emit(cfg, s);
  }
  return all_pass ? 0 : 1;
}

Signature parse_signature(const std::vector<int>& sig_values) {
  if (sig_values.size() != 2 || sig_values[0] < 1 || sig_values[1] < 1)
    throw Error("--sig expects p,q with p >= 1 and q >= 1");
  return Signature{sig_values[0], sig_values[1]};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Distance-squared flows to matrix groups, indefinite-unitary factorization,\n"
      "and cut-time sampling on model spaces.\n\n"
      "Matrix JSON schema: {\"rows\":r,\"cols\":c,\"real\":[row-major],\"imag\":[optional]}.\n"
      "Trajectory JSON schema: {\"times\":[...],\"points\":[matrix,...]}."};
  app.require_subcommand(1);

  RunConfig cfg;
  app.add_option("--tol", cfg.tol, "numerical tolerance (default 1e-8)")
      ->check(CLI::PositiveNumber);
  app.add_option("--samples", cfg.samples, "sample count for cut subcommands (default 10000)")
      ->check(CLI::Range(1, 100000000));
  app.add_option("--seed", cfg.seed, "RNG seed (default 0)");
  app.add_option("--format", cfg.format, "output format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", cfg.out, "write output to this file instead of stdout");

  int exit_code = 0;

  // nearest-orth
  {
    auto file = std::make_shared<std::string>();
    auto* sc = app.add_subcommand(
        "nearest-orth", "Nearest orthogonal matrix and squared distance (JSON; csv: matrix rows)");
    sc->fallthrough();
    sc->add_option("input", *file, "matrix JSON file")->required();
    sc->callback([&, file]() {
      Matrix a = matrix_from_json(load_json_file(*file));
      Matrix nearest = nearest_orthogonal(a);
      if (pick_format(cfg, "json") == "json") {
        Json j;
        j["nearest"] = matrix_to_json(nearest);
        j["dist_sq"] = dist_sq_to_on(a);
        emit(cfg, dump_json(j));
      } else {
        emit(cfg, matrix_csv(nearest));
      }
      exit_code = 0;
    });
  }

  // dist-on
  {
    auto file = std::make_shared<std::string>();
    auto* sc = app.add_subcommand("dist-on",
                                  "Squared distance to the orthogonal group (csv: dist_sq column)");
    sc->fallthrough();
    sc->add_option("input", *file, "matrix JSON file")->required();
    sc->callback([&, file]() {
      Matrix a = matrix_from_json(load_json_file(*file));
      double d = dist_sq_to_on(a);
      if (pick_format(cfg, "json") == "json")
        emit(cfg, dump_json(Json{{"dist_sq", d}}));
      else
        emit(cfg, scalar_csv("dist_sq", d));
      exit_code = 0;
    });
  }

  // flow-on
  {
    auto file = std::make_shared<std::string>();
    auto grid = std::make_shared<std::string>("0:1:11");
    auto* sc = app.add_subcommand(
        "flow-on",
        "Closed-form gradient flow toward the orthogonal group; trajectory of matrices "
        "(csv columns: t, entry_0..entry_{rc-1} row major)");
    sc->fallthrough();
    sc->add_option("input", *file, "matrix JSON file")->required();
    sc->add_option("--t-grid", *grid, "time grid start:end:count (default 0:1:11)");
    sc->callback([&, file, grid]() {
      Matrix a = matrix_from_json(load_json_file(*file));
      std::vector<double> ts = parse_t_grid(*grid);
      std::vector<Matrix> points;
      points.reserve(ts.size());
      for (double t : ts) points.push_back(flow_closed_form(a, t));
      if (pick_format(cfg, "json") == "json")
        emit(cfg, dump_json(matrix_trajectory_json(ts, points)));
      else
        emit(cfg, matrix_trajectory_csv(ts, points));
      exit_code = 0;
    });
  }

  // retraction
  {
    auto file = std::make_shared<std::string>();
    auto grid = std::make_shared<std::string>("0:1:11");
    auto* sc = app.add_subcommand(
        "retraction",
        "Linear retraction onto the orthogonal group; trajectory of matrices "
        "(csv columns: t, entry_0..entry_{rc-1} row major)");
    sc->fallthrough();
    sc->add_option("input", *file, "matrix JSON file")->required();
    sc->add_option("--t-grid", *grid, "time grid start:end:count (default 0:1:11)");
    sc->callback([&, file, grid]() {
      Matrix a = matrix_from_json(load_json_file(*file));
      std::vector<double> ts = parse_t_grid(*grid);
      std::vector<Matrix> points;
      points.reserve(ts.size());
      for (double t : ts) points.push_back(linear_retraction(a, t));
      if (pick_format(cfg, "json") == "json")
        emit(cfg, dump_json(matrix_trajectory_json(ts, points)));
      else
        emit(cfg, matrix_trajectory_csv(ts, points));
      exit_code = 0;
    });
  }

  // leftinv-dist
  {
    auto file = std::make_shared<std::string>();
    auto* sc = app.add_subcommand(
        "leftinv-dist", "Left-invariant distance to the rotation group (csv: distance column)");
    sc->fallthrough();
    sc->add_option("input", *file, "matrix JSON file, positive determinant")->required();
    sc->callback([&, file]() {
      Matrix a = matrix_from_json(load_json_file(*file));
      double d = dist_to_son(a);
      if (pick_format(cfg, "json") == "json")
        emit(cfg, dump_json(Json{{"distance", d}}));
      else
        emit(cfg, scalar_csv("distance", d));
      exit_code = 0;
    });
  }

  // leftinv-geodesic
  {
    auto file = std::make_shared<std::string>();
    auto grid = std::make_shared<std::string>("0:1:11");
    auto* sc = app.add_subcommand(
        "leftinv-geodesic",
        "Left-invariant geodesic from the matrix to its nearest rotation; trajectory of "
        "matrices (csv columns: t, entry_0..entry_{rc-1} row major)");
    sc->fallthrough();
    sc->add_option("input", *file, "matrix JSON file, positive determinant")->required();
    sc->add_option("--t-grid", *grid, "time grid start:end:count (default 0:1:11)");
    sc->callback([&, file, grid]() {
      Matrix a = matrix_from_json(load_json_file(*file));
      std::vector<double> ts = parse_t_grid(*grid);
      std::vector<Matrix> points;
      points.reserve(ts.size());
      for (double t : ts) points.push_back(geodesic_to_son(a, t));
      if (pick_format(cfg, "json") == "json")
        emit(cfg, dump_json(matrix_trajectory_json(ts, points)));
      else
        emit(cfg, matrix_trajectory_csv(ts, points));
      exit_code = 0;
    });
  }

  // upq-check / upq-decompose / upq-dist
  {
    auto file = std::make_shared<std::string>();
    auto sig_values = std::make_shared<std::vector<int>>();
    auto* sc = app.add_subcommand(
        "upq-check", "Indefinite-unitary membership residual (csv: in_group,residual columns)");
    sc->fallthrough();
    sc->add_option("input", *file, "complex matrix JSON file")->required();
    sc->add_option("--sig", *sig_values, "signature p,q")->delimiter(',')->expected(2)->required();
    sc->callback([&, file, sig_values]() {
      Signature sig = parse_signature(*sig_values);
      CMatrix m = cmatrix_from_json(load_json_file(*file));
      MembershipResult res = is_upq(m, sig, cfg.tol);
      if (pick_format(cfg, "json") == "json") {
        emit(cfg, dump_json(Json{{"in_group", res.in_group}, {"residual", res.residual}}));
      } else {
        emit(cfg, std::string("in_group,residual\n") + (res.in_group ? "1" : "0") + "," +
                      format_double(res.residual) + "\n");
      }
      exit_code = 0;
    });
  }
  {
    auto file = std::make_shared<std::string>();
    auto sig_values = std::make_shared<std::vector<int>>();
    auto* sc = app.add_subcommand(
        "upq-decompose",
        "Polar factorization u exp(y) of an indefinite-unitary matrix (JSON only)");
    sc->fallthrough();
    sc->add_option("input", *file, "complex matrix JSON file")->required();
    sc->add_option("--sig", *sig_values, "signature p,q")->delimiter(',')->expected(2)->required();
    sc->callback([&, file, sig_values]() {
      Signature sig = parse_signature(*sig_values);
      if (pick_format(cfg, "json") != "json")
        throw Error("upq-decompose supports only --format json");
      UpqElement el = make_upq(cmatrix_from_json(load_json_file(*file)), sig, cfg.tol);
      UpqPolar pol = polar_upq(el);
      CMatrix recon = pol.u.mat * matrix_exp<std::complex<double>>(pol.y);
      Json j;
      j["unitary"] = cmatrix_to_json(pol.u.mat);
      j["log_positive"] = cmatrix_to_json(pol.y);
      j["reconstruction_error"] = (recon - el.mat).norm();
      emit(cfg, dump_json(j));
      exit_code = 0;
    });
  }
  {
    auto file = std::make_shared<std::string>();
    auto sig_values = std::make_shared<std::vector<int>>();
    auto* sc = app.add_subcommand(
        "upq-dist",
        "Squared left-invariant distance to the maximal compact part (csv: dist_sq column)");
    sc->fallthrough();
    sc->add_option("input", *file, "complex matrix JSON file")->required();
    sc->add_option("--sig", *sig_values, "signature p,q")->delimiter(',')->expected(2)->required();
    sc->callback([&, file, sig_values]() {
      Signature sig = parse_signature(*sig_values);
      UpqElement el = make_upq(cmatrix_from_json(load_json_file(*file)), sig, cfg.tol);
      double d = dist_sq_upq(el);
      if (pick_format(cfg, "json") == "json")
        emit(cfg, dump_json(Json{{"dist_sq", d}}));
      else
        emit(cfg, scalar_csv("dist_sq", d));
      exit_code = 0;
    });
  }

  // cut <case>
  {
    auto* cut = app.add_subcommand(
        "cut",
        "Sample cut times along random unit normals (csv columns: base_0..base_{d-1}, "
        "dir_0..dir_{d-1}, s_value, cause, cut_0..cut_{d-1})");
    cut->require_subcommand(1);
    cut->fallthrough();
    auto ca = std::make_shared<CaseArgs>();

    auto* eq = cut->add_subcommand("equator", "k-sphere equator inside the n-sphere");
    eq->fallthrough();
    eq->add_option("--n", ca->n, "ambient sphere dimension (default 2)")->check(CLI::Range(1, 16));
    eq->add_option("--k", ca->k, "equator dimension (default 1)")->check(CLI::Range(0, 15));
    eq->callback([&, ca]() { exit_code = run_cut(cfg, "equator", *ca); });

    auto* pt = cut->add_subcommand("sphere-point", "single point on the n-sphere (at e_1)");
    pt->fallthrough();
    pt->add_option("--n", ca->n, "sphere dimension (default 2)")->check(CLI::Range(1, 16));
    pt->callback([&, ca]() { exit_code = run_cut(cfg, "sphere-point", *ca); });

    auto* cl = cut->add_subcommand("clifford", "two orthogonal great circles in the 3-sphere");
    cl->fallthrough();
    cl->callback([&, ca]() { exit_code = run_cut(cfg, "clifford", *ca); });

    auto* el = cut->add_subcommand("ellipse", "ellipse in the plane, inward normals");
    el->fallthrough();
    el->add_option("--a", ca->a, "semi-major axis (default 2)")->check(CLI::PositiveNumber);
    el->add_option("--b", ca->b, "semi-minor axis (default 1)")->check(CLI::PositiveNumber);
    el->callback([&, ca]() { exit_code = run_cut(cfg, "ellipse", *ca); });
  }

  // flow to-n | to-cut
  {
    auto* flow = app.add_subcommand(
        "flow",
        "Flow a point toward the submanifold (to-n) or deform it to the cut locus (to-cut); "
        "trajectory output (csv columns: t, x_0..x_{d-1})");
    flow->require_subcommand(1);
    flow->fallthrough();
    for (const char* mode : {"to-n", "to-cut"}) {
      auto* sc = flow->add_subcommand(
          mode, std::string(mode) == "to-n" ? "gradient flow toward the submanifold"
                                            : "deformation onto the cut locus, t in [0,1]");
      sc->fallthrough();
      auto ca = std::make_shared<CaseArgs>();
      auto case_name = std::make_shared<std::string>();
      auto point_values = std::make_shared<std::vector<double>>();
      auto grid = std::make_shared<std::string>("0:1:11");
      sc->add_option("case", *case_name, "one of: equator, sphere-point, clifford, ellipse")
          ->required()
          ->check(CLI::IsMember({"equator", "sphere-point", "clifford", "ellipse"}));
      sc->add_option("--n", ca->n, "sphere dimension for equator/sphere-point (default 2)")
          ->check(CLI::Range(1, 16));
      sc->add_option("--k", ca->k, "equator dimension (default 1)")->check(CLI::Range(0, 15));
      sc->add_option("--a", ca->a, "ellipse semi-major axis (default 2)")
          ->check(CLI::PositiveNumber);
      sc->add_option("--b", ca->b, "ellipse semi-minor axis (default 1)")
          ->check(CLI::PositiveNumber);
      sc->add_option("--point", *point_values, "start point coordinates x0,x1,...")
          ->delimiter(',')
          ->required();
      sc->add_option("--t-grid", *grid, "time grid start:end:count (default 0:1:11)");
      bool to_sub = std::string(mode) == "to-n";
      sc->callback([&, ca, case_name, point_values, grid, to_sub]() {
        exit_code = run_flow_case(cfg, to_sub ? FlowKind::ToSubmanifold : FlowKind::ToCutLocus,
                                  *case_name, *ca, *point_values, *grid);
      });
    }
  }

  // verify all
  {
    auto* ver = app.add_subcommand("verify", "Run the named verification suite");
    ver->require_subcommand(1);
    ver->fallthrough();
    auto* all = ver->add_subcommand("all",
                                    "run every check; prints one PASS/FAIL line per check and "
                                    "exits 1 on any failure");
    all->fallthrough();
    all->callback([&]() { exit_code = run_verify(cfg); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return exit_code;
}
