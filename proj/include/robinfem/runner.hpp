#pragma once

#include <string>
#include <vector>

#include "robinfem/config.hpp"
#include "robinfem/diagnostics.hpp"

namespace robinfem {

// Ladder run that keeps the per-level fields (the diagnostics need them).
struct LadderRun {
  std::vector<double> levels;
  std::vector<DiscreteField> fields;
  SolveReport report;
  bool failed = false;
  std::string failure;
};

LadderRun run_ladder_collect(ProblemPtr spec, const SolverConfig& config);

// Provenance lines stamped at the top of every artifact.
std::vector<std::string> provenance(const RunConfig& cfg, const std::string& subcommand);

// CLI subcommand bodies. Artifacts land in out_dir; the return value is the
// process exit status (0 ok, 1 run/check failure). Config errors are caught
// by the caller before these run.
int run_solve(const RunConfig& cfg, const std::string& out_dir, bool quiet);
int run_verify(const RunConfig& cfg, const std::string& out_dir, bool quiet);
int run_estimates(const RunConfig& cfg, const std::string& out_dir, bool quiet);
int run_sweep(const RunConfig& cfg, const std::string& out_dir, bool quiet);

}  // namespace robinfem
