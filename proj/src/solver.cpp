#include "robinfem/solver.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace robinfem {

std::vector<double> SolverConfig::effective_schedule() const {
  if (!schedule.empty()) return schedule;
  std::vector<double> s;
  for (double n = 1.0; n <= n_max; n *= 2.0) s.push_back(n);
  return s;
}

std::vector<std::string> SolverConfig::validate() const {
  std::vector<std::string> issues;
  if (!(tol_fp > 0.0)) issues.push_back("solver: tol_fp must be positive");
  if (!(tol_res > 0.0)) issues.push_back("solver: tol_res must be positive");
  if (tol_ladder < 0.0) issues.push_back("solver: tol_ladder must be >= 0");
  if (!(damping > 0.0 && damping <= 1.0)) issues.push_back("solver: damping must be in (0,1]");
  if (!(lin_tol > 0.0)) issues.push_back("solver: lin_tol must be positive");
  if (max_outer < 1) issues.push_back("solver: max_outer must be >= 1");
  for (size_t i = 0; i < schedule.size(); ++i) {
    if (schedule[i] < 1.0 || (i > 0 && schedule[i] <= schedule[i - 1])) {
      issues.push_back("solver: schedule must be increasing with levels >= 1");
      break;
    }
  }
  return issues;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Eigen::VectorXd krylov_solve(const SparseOperator& op, const Eigen::VectorXd& rhs,
                             double lin_tol) {
  Eigen::SparseMatrix<double> A = op.to_eigen();
  double diag_scale = 0.0;
  for (int i = 0; i < A.rows(); ++i) diag_scale = std::max(diag_scale, std::abs(A.coeff(i, i)));
  if (diag_scale == 0.0) diag_scale = 1.0;

  // CG first (the tangent is symmetric here), BiCGSTAB as the stabilized
  // fallback. A cold start far above the truncation kinks makes sigma_n'
  // vanish and the tangent near-singular; escalate a diagonal shift until
  // the solve succeeds (the line search absorbs the perturbed direction).
  for (double shift : {0.0, 1e-10, 1e-6, 1e-2}) {
    Eigen::SparseMatrix<double> As = A;
    if (shift > 0.0) {
      for (int i = 0; i < As.rows(); ++i) As.coeffRef(i, i) += shift * diag_scale;
    }
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                             Eigen::DiagonalPreconditioner<double>>
        cg;
    cg.setTolerance(lin_tol);
    cg.setMaxIterations(20 * As.rows());
    cg.compute(As);
    Eigen::VectorXd x = cg.solve(rhs);
    if (cg.info() == Eigen::Success && x.allFinite()) return x;

    Eigen::BiCGSTAB<Eigen::SparseMatrix<double>, Eigen::DiagonalPreconditioner<double>> bi;
    bi.setTolerance(lin_tol);
    bi.setMaxIterations(40 * As.rows());
    bi.compute(As);
    x = bi.solve(rhs);
    if (bi.info() == Eigen::Success && x.allFinite()) return x;
  }
  throw std::runtime_error("linear solve failed at every regularization shift");
}

double boundary_l2_change(const Mesh2D& mesh, const std::vector<double>& a,
                          const std::vector<double>& b) {
  const auto& w = mesh.lumped_boundary_measure();
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    if (w[i] > 0.0) {
      const double d = a[i] - b[i];
      s += w[i] * d * d;
    }
  }
  return std::sqrt(s);
}

void finalize_report(const Assembler& asmb, const DiscreteField& u, LevelReport& rep) {
  rep.min_node = u.min_value();
  rep.min_boundary_node = u.min_boundary_value();
  const Eigen::VectorXd r = asmb.residual(u);
  rep.mass_defect = r.sum();
  rep.absorption = asmb.absorption_integral(u);
  rep.load = asmb.load_integral();
  rep.source = asmb.source_integral(u);
}

// Damped Newton with backtracking on ||R||; frozen_trace freezes the source.
DiscreteField newton_solve(const Assembler& asmb, const DiscreteField& initial,
                           const std::vector<double>* frozen_trace, double tol_res,
                           int max_iter, double lin_tol, LevelReport& rep) {
  DiscreteField u = initial;
  Eigen::VectorXd r = asmb.residual(u, frozen_trace);
  double rn = r.norm();
  rep.residual_history.push_back(rn);
  rep.min_node_history.push_back(u.min_value());
  rep.boundary_change_history.push_back(0.0);

  for (int it = 0; it < max_iter; ++it) {
    if (rn <= tol_res) {
      rep.converged = true;
      rep.iterations = it;
      return u;
    }
    const SparseOperator J = asmb.jacobian(u, frozen_trace != nullptr);
    const Eigen::VectorXd d = krylov_solve(J, -r, lin_tol);

    // Cap the first trial step: overshooting far above the truncation kinks
    // lands on a sigma_n plateau where the tangent degenerates.
    const double cap = 10.0 * (1.0 + u.max_abs());
    const double dmax = d.lpNorm<Eigen::Infinity>();
    double step = dmax > cap ? cap / dmax : 1.0;
    DiscreteField trial = u;
    Eigen::VectorXd r_trial;
    double rn_trial = rn;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      for (int i = 0; i < u.size(); ++i) trial[i] = u[i] + step * d[i];
      r_trial = asmb.residual(trial, frozen_trace);
      rn_trial = r_trial.norm();
      if (rn_trial <= (1.0 - 1e-4 * step) * rn) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      rep.iterations = it + 1;
      throw SolverError("newton: line search stalled at residual " + std::to_string(rn), rep);
    }
    u = trial;
    r = r_trial;
    rn = rn_trial;
    rep.residual_history.push_back(rn);
    rep.min_node_history.push_back(u.min_value());
    rep.boundary_change_history.push_back(0.0);
  }
  if (rn <= tol_res) {
    rep.converged = true;
    rep.iterations = max_iter;
    return u;
  }
  rep.iterations = max_iter;
  throw SolverError("newton: max iterations exceeded at residual " + std::to_string(rn), rep);
}

}  // namespace

DiscreteField schauder_map(const RegularizedProblem& rp, const DiscreteField& v,
                           const SolverConfig& config) {
  Assembler asmb(rp);
  LevelReport rep;
  rep.level = rp.level();
  return newton_solve(asmb, v, &v.values(), config.tol_res, config.max_inner,
                      config.lin_tol, rep);
}

std::pair<DiscreteField, LevelReport> solve_level(const RegularizedProblem& rp,
                                                  const SolverConfig& config,
                                                  const DiscreteField& initial) {
  const auto t0 = Clock::now();
  Assembler asmb(rp);
  LevelReport rep;
  rep.level = rp.level();

  if (config.mode == SolverConfig::Mode::Newton) {
    DiscreteField u =
        newton_solve(asmb, initial, nullptr, config.tol_res, config.max_outer,
                     config.lin_tol, rep);
    finalize_report(asmb, u, rep);
    rep.wall_seconds = seconds_since(t0);
    return {u, rep};
  }

  // Picard: iterate the frozen-source map on the boundary trace with
  // adaptive damping (halved after two consecutive increases of the change).
  DiscreteField v = initial;
  DiscreteField w = initial;
  double damping = config.damping;
  double prev_change = kInfinity;
  int increases = 0;
  for (int it = 0; it < config.max_outer; ++it) {
    LevelReport inner;
    w = newton_solve(asmb, w, &v.values(), config.tol_res, config.max_inner,
                     config.lin_tol, inner);
    const double change = boundary_l2_change(rp.mesh(), w.values(), v.values());
    rep.residual_history.push_back(asmb.residual(w).norm());
    rep.boundary_change_history.push_back(change);
    rep.min_node_history.push_back(w.min_value());
    rep.iterations = it + 1;
    if (change <= config.tol_fp) {
      rep.converged = true;
      finalize_report(asmb, w, rep);
      rep.wall_seconds = seconds_since(t0);
      return {w, rep};
    }
    if (change > prev_change) {
      if (++increases >= 2) {
        damping *= 0.5;
        increases = 0;
      }
    } else {
      increases = 0;
    }
    prev_change = change;
    for (int i = 0; i < v.size(); ++i) v[i] = (1.0 - damping) * v[i] + damping * w[i];
  }
  finalize_report(asmb, w, rep);
  rep.wall_seconds = seconds_since(t0);
  throw SolverError("picard: max iterations exceeded", rep);
}

std::pair<DiscreteField, SolveReport> solve_ladder(ProblemPtr spec, const SolverConfig& config) {
  if (spec->sign_changing) {
    throw std::invalid_argument("solve_ladder: sign-changing instances are residual-only");
  }
  SolveReport report;
  DiscreteField u(spec->mesh, 0.0);
  bool first = true;
  for (double n : config.effective_schedule()) {
    const RegularizedProblem rp = regularize(spec, n);
    auto [u_next, rep] = solve_level(rp, config, u);
    const double change = first ? kInfinity : u_next.max_abs_diff(u);
    if (!first) report.level_changes.push_back(change);
    report.levels.push_back(std::move(rep));
    report.final_level = n;
    u = std::move(u_next);
    if (!first && config.tol_ladder > 0.0 && change <= config.tol_ladder) {
      report.ladder_converged = true;
      break;
    }
    first = false;
  }
  return {u, report};
}

std::pair<DiscreteField, double> solve_barrier(const ProblemSpec& spec,
                                               const SolverConfig& config) {
  ProblemPtr barrier = subsolution_problem(spec);
  // Level 1 realizes the T_1(f) interior datum of the barrier problem.
  const RegularizedProblem rp = regularize(barrier, 1.0);
  SolverConfig cfg = config;
  cfg.mode = SolverConfig::Mode::Newton;
  auto [v, rep] = solve_level(rp, cfg, DiscreteField(spec.mesh, 0.0));
  return {v, v.min_boundary_value()};
}

void SolveReport::write_csv(std::ostream& os, const std::vector<std::string>& header_lines) const {
  for (const auto& h : header_lines) os << "# " << h << "\n";
  os << "level,iter,residual,boundary_change,min_node\n";
  char buf[128];
  for (const auto& lev : levels) {
    for (size_t i = 0; i < lev.residual_history.size(); ++i) {
      const double bc = i < lev.boundary_change_history.size() ? lev.boundary_change_history[i] : 0.0;
      const double mn = i < lev.min_node_history.size() ? lev.min_node_history[i] : 0.0;
      std::snprintf(buf, sizeof(buf), "%.17g,%zu,%.17g,%.17g,%.17g\n", lev.level, i,
                    lev.residual_history[i], bc, mn);
      os << buf;
    }
  }
}

}  // namespace robinfem
