#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "robinfem/problem.hpp"
#include "robinfem/solver.hpp"

namespace robinfem {

enum class CheckStatus { Pass, Fail, Refused, Info };

struct CheckResult {
  std::string name;
  double measured = 0.0;
  double bound = 0.0;      // the value compared against, when there is one
  double tolerance = 0.0;  // tolerance used by the comparison
  CheckStatus status = CheckStatus::Info;
  std::string detail;
};

struct EstimateReport {
  std::string title;
  std::string context;  // mesh/level the checks were run on
  std::vector<CheckResult> checks;

  bool all_pass() const;
  void add(CheckResult c) { checks.push_back(std::move(c)); }
  void write_csv(std::ostream& os, const std::vector<std::string>& header_lines = {}) const;
  void write_summary(std::ostream& os) const;
};

// 40 log-spaced points, endpoints included.
std::vector<double> log_spaced(double lo, double hi, int count);

// max/min <= factor over the positive entries; vacuously true when fewer
// than two entries.
bool within_factor(const std::vector<double>& values, double factor);

struct EntropyResidual {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;  // |lhs - rhs|
  bool applicable = true;
  int flagged_nodes = 0;  // boundary nodes with u <= 1e-14 and positive g
};

// Defect of the truncated variational identity against the bounded test
// field v at truncation height k, assembled with the UNtruncated data and
// nonlinearities (this tests the limit object). Nodes where u vanishes but
// g does not make the singular source non-integrable; the result is then
// marked inapplicable.
EntropyResidual entropy_residual(const DiscreteField& u, const DiscreteField& v, double k,
                                 const ProblemSpec& spec);

// E(k) = ||T_k(u)||^p_{W^{1,p}} per k and the fitted constant C = max E(k)/k.
// The fitted C lands in the report; cross-level/mesh stability is judged by
// truncation_energy_stability.
EstimateReport truncation_energy_check(const DiscreteField& u, const ProblemSpec& spec,
                                       const std::vector<double>& k_grid);
double truncation_energy_constant(const DiscreteField& u, const ProblemSpec& spec,
                                  const std::vector<double>& k_grid);
EstimateReport truncation_energy_stability(const std::vector<std::pair<std::string, double>>& cs,
                                           double factor = 2.0);

// For each threshold t checks the superlevel-set inequality
//   sum_{u_i>t} lambda_bar_i sigma_n(u_i) <= sum_{u_i>t} F_i + sum_{u_i>t} g_bar_i S(u_i)
// with vertex indicators and lumped measures, up to rel_slack relative slack.
EstimateReport absorption_estimate_check(const DiscreteField& u, const RegularizedProblem& rp,
                                         const std::vector<double>& t_grid,
                                         double rel_slack = 1e-8);

struct QuasiNormSample {
  double r = 0.0;
  std::vector<double> thresholds;
  std::vector<double> samples;  // t * mu({|f| >= t})^{1/r}
  double sup = 0.0;
};

// Weak-Lebesgue quasi-norm from nodal values and their lumped measures.
// Thresholds: 40 log-spaced points spanning [min positive |v|, max |v|];
// level sets use >= so the sup is attained on piecewise-constant data.
QuasiNormSample marcinkiewicz_quasinorm(const std::vector<double>& values,
                                        const std::vector<double>& measures, double r,
                                        int grid_points = 40);

// Solves the final schedule level cold from u = 0 and from u = 10x the first
// run's solution scale; passes when the fields agree nodewise within
// max(1e-8, 1e3 tol_res). Refused unless sigma is flagged increasing and h
// nonincreasing (the uniqueness hypotheses).
EstimateReport uniqueness_crosscheck(ProblemPtr spec, const SolverConfig& config);

struct BoundaryBalance {
  double absorption = 0.0;  // bnd lambda_n sigma_n(u)
  double load = 0.0;        // int f_n
  double source = 0.0;      // bnd h_n(u) g_n
  double defect = 0.0;      // absorption - load - source
};

BoundaryBalance boundary_l1_balance(const DiscreteField& u, const RegularizedProblem& rp);

// max_i |R_i| / s_i of the untruncated residual with edge-quadrature
// boundary terms, s_i the lumped interior + boundary measure of vertex i.
double scaled_weak_residual(const ProblemSpec& spec, const DiscreteField& u);

}  // namespace robinfem
