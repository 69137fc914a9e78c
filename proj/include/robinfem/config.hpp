#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "robinfem/problem.hpp"
#include "robinfem/solver.hpp"

namespace robinfem {

struct ConfigError {
  int line = 0;  // 0 for cross-field errors
  std::string message;
};

// One data field (f, lambda or g) in the config grammar.
struct FieldConfig {
  std::string family = "constant";  // constant|affine|theta-power|disk-example|
                                    // point-power|tabulated|manufactured
  double value = 0.0;               // constant value / singular family scale
  double alpha = 0.0;
  double a0 = 0.0, ax = 0.0, ay = 0.0;
  double x0 = 0.0, y0 = 0.0;
  std::string coord = "x";  // tabulated interpolation coordinate: x|y|theta
  std::vector<std::pair<double, double>> samples;

  bool operator==(const FieldConfig&) const = default;
};

// A full run: domain, problem data, solver knobs, diagnostic grids.
// Parsed from the flat `section.key = value` grammar with `#` comments.
struct RunConfig {
  std::string mesh_domain = "square";
  int mesh_m = 8;
  int mesh_refine = 0;

  std::string problem_mode = "general";
  int problem_N = 3;
  double problem_eta = 1.0;
  int problem_quad_order = 4;

  std::string flux_family = "p-laplacian";
  double flux_p = 2.0;
  double flux_w0 = 1.0, flux_w1 = 0.0, flux_w2 = 0.0;

  FieldConfig f;
  FieldConfig lambda = FieldConfig{"constant", 1.0};
  FieldConfig g;

  std::string sigma_family = "power";
  double sigma_q = 1.0, sigma_scale = 1.0;
  bool sigma_increasing = true;
  std::vector<std::pair<double, double>> sigma_samples;

  std::string h_family = "power-singular";
  double h_eta = -1.0;  // -1: follow problem.eta
  double h_c1 = 1.0, h_s1 = 1.0, h_shift = 1.0;
  bool h_nonincreasing = true;
  std::vector<std::pair<double, double>> h_samples;

  double exact_a0 = 0.0, exact_ax = 0.0, exact_ay = 0.0;
  double exact_qxx = 0.0, exact_qxy = 0.0, exact_qyy = 0.0;

  std::string solver_mode = "newton";
  double solver_tol_fp = 1e-11;
  double solver_tol_res = 1e-11;
  double solver_tol_ladder = 1e-9;
  double solver_damping = 1.0;
  double solver_lin_tol = 1e-12;
  int solver_max_outer = 200;
  double solver_n_max = 16384.0;
  std::vector<double> solver_schedule;

  int diag_grid_points = 40;
  int diag_t_count = 10;
  int verify_refinements = 3;

  std::string sweep_parameter;
  std::vector<double> sweep_values;

  std::uint64_t seed = 0;

  bool operator==(const RunConfig&) const = default;

  double effective_h_eta() const { return h_eta < 0.0 ? problem_eta : h_eta; }
};

struct ParseResult {
  RunConfig config;
  std::vector<ConfigError> errors;  // empty on success; all errors, not just the first
  bool ok() const { return errors.empty(); }
};

// Parses the grammar, then validates every constraint; lambda/g defaults are
// constant 1 (absorption weight) and constant 0 (source). The four required
// keys are mesh.domain, mesh.m, flux.p and problem.eta.
ParseResult parse_config(const std::string& text);

// Canonical serialization: every key, fixed order, 17 significant digits.
// parse(serialize(c)) reproduces c, and re-serialization is byte-identical.
std::string serialize_config(const RunConfig& cfg);

// FNV-1a hash of the canonical serialization; stamped into artifact headers.
std::uint64_t config_hash(const RunConfig& cfg);

MeshPtr build_mesh(const RunConfig& cfg);
SolverConfig build_solver_config(const RunConfig& cfg);
// Builds the problem; "manufactured" f/g derive the data from exact.* via
// the manufactured-solution construction.
ProblemPtr build_problem(const RunConfig& cfg, MeshPtr mesh);

}  // namespace robinfem
