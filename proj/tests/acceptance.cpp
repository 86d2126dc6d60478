// Acceptance gate: one line per criterion, exit 0 only if every criterion
// passes within its time budget. argv[1] names the CLI binary used by the
// determinism criterion.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "cutloci/verify.hpp"

namespace {

struct CliRun {
  bool ok = false;
  int exit_code = -1;
  std::string output;
};

CliRun run_cli(const std::string& cli, const std::string& args) {
  CliRun run;
  std::string cmd = "\"" + cli + "\" " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return run;
  char buf[4096];
  std::size_t got = 0;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) run.output.append(buf, got);
  int status = pclose(pipe);
  if (WIFEXITED(status)) {
    run.ok = true;
    run.exit_code = WEXITSTATUS(status);
  }
  return run;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s <cli-binary>\n", argv[0]);
    return 2;
  }
  const std::string cli = argv[1];
  const std::uint64_t seed = 0;

  using Check = cutloci::verify::CheckResult (*)(std::uint64_t);
  struct Criterion {
    Check fn;
    double limit_seconds;
  };
  const std::vector<Criterion> criteria = {
      {cutloci::verify::check_distance_oracle, 30.0},
      {cutloci::verify::check_flow_exactness, 5.0},
      {cutloci::verify::check_hessian_block, 10.0},
      {cutloci::verify::check_left_invariant_distance, 10.0},
      {cutloci::verify::check_upq_factorization, 20.0},
      {cutloci::verify::check_frechet_derivative, 10.0},
      {cutloci::verify::check_one_sided_slopes, 5.0},
      {cutloci::verify::check_cut_times, 60.0},
      {cutloci::verify::check_ellipse_regularity, 10.0},
      {cutloci::verify::check_injectivity, 60.0},
      {cutloci::verify::check_flow_laws, 10.0},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    auto start = std::chrono::steady_clock::now();
    cutloci::verify::CheckResult res;
    try {
      res = criteria[i].fn(seed);
    } catch (const std::exception& e) {
      res.name = "criterion " + std::to_string(i + 1);
      res.pass = false;
      res.detail = std::string("threw: ") + e.what();
    }
    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool in_time = elapsed <= criteria[i].limit_seconds;
    bool pass = res.pass && in_time;
    failures += pass ? 0 : 1;
    std::printf("%s criterion %2zu (%s): %s [%.2fs, limit %.0fs%s]\n", pass ? "PASS" : "FAIL",
                i + 1, res.name.c_str(), res.detail.c_str(), elapsed,
                criteria[i].limit_seconds, in_time ? "" : ", EXCEEDED");
    std::fflush(stdout);
  }

  {
    auto start = std::chrono::steady_clock::now();
    CliRun first = run_cli(cli, "verify all --seed 7");
    CliRun second = run_cli(cli, "verify all --seed 7");
    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool pass = first.ok && second.ok && first.exit_code == 0 && second.exit_code == 0 &&
                !first.output.empty() && first.output == second.output;
    failures += pass ? 0 : 1;
    std::string detail;
    if (!first.ok || !second.ok)
      detail = "could not run the CLI";
    else if (first.exit_code != 0 || second.exit_code != 0)
      detail = "exit codes " + std::to_string(first.exit_code) + " and " +
               std::to_string(second.exit_code);
    else if (first.output.empty())
      detail = "empty output";
    else if (first.output != second.output)
      detail = "outputs differ between runs";
    else
      detail = "two runs, " + std::to_string(first.output.size()) + " identical bytes, exit 0";
    std::printf("%s criterion 12 (byte_determinism): %s [%.2fs]\n", pass ? "PASS" : "FAIL",
                detail.c_str(), elapsed);
  }

  std::printf("acceptance: %d/12 criteria passed\n", 12 - failures);
  return failures == 0 ? 0 : 1;
}
