#pragma once

#include "debary/suites.hpp"

#include <iosfwd>
#include <string>

namespace debary {

/// Exit codes shared by all subcommands:
///   0 success, 1 parse/usage error, 2 inadmissible measure,
///   3 convergence failure (including per-point failures in tables),
///   4 property-suite failure, 5 other runtime errors.
enum ExitCode : int {
  kExitOk = 0,
  kExitParse = 1,
  kExitInadmissible = 2,
  kExitNoConvergence = 3,
  kExitCheckFailed = 4,
  kExitRuntime = 5,
};

struct RunConfig {
  std::string command;  // barycenter | extend | field | check | conjecture | mesh
  std::string measure_path;
  std::string map_path;
  std::string points_path;
  std::string grid_spec;
  std::string suite;
  std::string out_path;
  std::string at;  // inline point(s) for `field`, comma separated coords

  int dim = 2;
  int level = 32;
  double tol = 1e-12;
  int max_iters = 200;
  std::uint64_t seed = 1;
  int workers = 0;  // 0 = machine parallelism

  std::string surface = "disc";  // mesh: disc | sphere
  int mesh_segments = 24;
  double mesh_radius = 0.9;

  SolverConfig solver() const { return SolverConfig{tol, max_iters, 0.5}; }
  int effective_workers() const;
};

int cmd_barycenter(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_field(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_extend(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_check(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_conjecture(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_mesh(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Dispatch on cfg.command.
int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Full argv entry point (CLI11 parsing); used by the binary in tools/.
int run_cli(int argc, char** argv);

}  // namespace debary
