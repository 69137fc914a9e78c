#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "robinfem/assembly.hpp"
#include "robinfem/problem.hpp"

namespace robinfem {

struct SolverConfig {
  enum class Mode { Picard, Newton };

  Mode mode = Mode::Newton;
  double tol_fp = 1e-11;      // Picard: weighted L2 change of the boundary trace
  double tol_res = 1e-11;     // Newton: l2 residual norm
  double tol_ladder = 1e-9;   // nodal max change between levels; 0 disables the stop
  double damping = 1.0;       // Picard mixing, in (0, 1]
  double lin_tol = 1e-12;     // inner Krylov tolerance relative to ||rhs||
  int max_outer = 200;
  int max_inner = 60;         // Newton iterations inside one Picard step
  double n_max = 16384.0;     // 2^14
  std::vector<double> schedule;  // empty: 1, 2, 4, ..., n_max

  std::vector<double> effective_schedule() const;
  std::vector<std::string> validate() const;
};

struct LevelReport {
  double level = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> residual_history;         // per outer iteration
  std::vector<double> boundary_change_history;  // Picard mode (0 in Newton rows)
  std::vector<double> min_node_history;
  double min_node = 0.0;
  double min_boundary_node = 0.0;
  double mass_defect = 0.0;  // sum of residual entries at the final iterate
  double absorption = 0.0, load = 0.0, source = 0.0;
  double wall_seconds = 0.0;
};

struct SolveReport {
  std::vector<LevelReport> levels;
  bool ladder_converged = false;
  double final_level = 0.0;
  std::vector<double> level_changes;  // nodal max change between levels

  // One row per iteration: level, iter, residual, boundary_change, min_node.
  void write_csv(std::ostream& os, const std::vector<std::string>& header_lines = {}) const;
};

// The existence argument guarantees a fixed point, not convergence of any
// particular iteration: divergence is reported, not asserted away.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, LevelReport report)
      : std::runtime_error(what), report(std::move(report)) {}
  LevelReport report;
};

// One application of the trace-to-trace map: solves the level problem with
// the boundary source factor frozen at v.
DiscreteField schauder_map(const RegularizedProblem& rp, const DiscreteField& v,
                           const SolverConfig& config);

// Solves one level from the initial guess, in the configured mode.
std::pair<DiscreteField, LevelReport> solve_level(const RegularizedProblem& rp,
                                                  const SolverConfig& config,
                                                  const DiscreteField& initial);

// Runs the level schedule with warm starts; stops early when the nodal max
// change drops below tol_ladder.
std::pair<DiscreteField, SolveReport> solve_ladder(ProblemPtr spec, const SolverConfig& config);

// Solves the linear barrier problem and returns (v, cbar = min of v over
// boundary vertices). Throws std::invalid_argument when lambda is unbounded.
std::pair<DiscreteField, double> solve_barrier(const ProblemSpec& spec,
                                               const SolverConfig& config);

}  // namespace robinfem
