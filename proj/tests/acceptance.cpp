// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances are pinned here, not configurable.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include "robinfem/diagnostics.hpp"
#include "robinfem/runner.hpp"

using namespace robinfem;

namespace {

int failures = 0;

using Clock = std::chrono::steady_clock;

struct Timer {
  Clock::time_point t0 = Clock::now();
  double seconds() const { return std::chrono::duration<double>(Clock::now() - t0).count(); }
};

void report(int id, const char* name, bool pass, const std::string& detail, double seconds) {
  std::printf("%s criterion %2d: %s (%s, %.2fs)\n", pass ? "PASS" : "FAIL", id, name,
              detail.c_str(), seconds);
  if (!pass) ++failures;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

ProblemPtr constant_instance(MeshPtr mesh, double eta) {
  auto spec = std::make_shared<ProblemSpec>();
  spec->mesh = mesh;
  spec->flux = FluxSpec{};
  spec->f = ScalarFunctionSpec::constant(0.0);
  spec->lambda = ScalarFunctionSpec::constant(1.0);
  spec->g = ScalarFunctionSpec::constant(1.0);
  spec->sigma = SigmaSpec{};
  spec->h = HSpec{HSpec::Family::PowerSingular, eta, 1.0};
  spec->eta = eta;
  spec->mode = RegularizationMode::General;
  return spec;
}

ProblemPtr manufactured_instance(MeshPtr mesh) {
  AnalyticField u;
  u.c = 2.0;
  u.ax = 1.0;
  return manufacture(u, ScalarFunctionSpec::constant(1.0), SigmaSpec{},
                     HSpec{HSpec::Family::PowerSingular, 1.0, 1.0}, FluxSpec{}, mesh, 1.0);
}

// General-mode demo with p = 1.5 and an L1 boundary source singular at one
// boundary point (theta0 = 0.7 on the unit circle).
ProblemPtr singular_demo(MeshPtr disk, double p = 1.5) {
  auto spec = std::make_shared<ProblemSpec>();
  spec->mesh = disk;
  spec->flux.p = p;
  spec->f = ScalarFunctionSpec::constant(1.0);
  spec->lambda = ScalarFunctionSpec::constant(1.0);
  spec->g = ScalarFunctionSpec::point_power(1.0, 0.5, {std::cos(0.7), std::sin(0.7)});
  SigmaSpec sigma;
  sigma.exponent = p - 1.0;
  spec->sigma = sigma;
  spec->h = HSpec{HSpec::Family::PowerSingular, 1.0, 1.0};
  spec->eta = 1.0;
  spec->dimN = 2;  // the exponent formulas run at N = 2 here
  spec->mode = RegularizationMode::General;
  return spec;
}

// Model-mode instance for the monotonicity/barrier criteria.
ProblemPtr model_instance(MeshPtr mesh, ScalarFunctionSpec g) {
  auto spec = std::make_shared<ProblemSpec>();
  spec->mesh = mesh;
  spec->flux = FluxSpec{};
  spec->f = ScalarFunctionSpec::constant(1.0);
  spec->lambda = ScalarFunctionSpec::constant(1.0);
  spec->g = std::move(g);
  spec->sigma = SigmaSpec{};
  spec->h = HSpec{HSpec::Family::PowerSingular, 1.0, 1.0};
  spec->eta = 1.0;
  spec->mode = RegularizationMode::Model;
  return spec;
}

void criterion_1() {
  Timer timer;
  auto mesh = generate_unit_square(8);
  SolverConfig cfg;
  double worst = 0.0;
  for (double eta : {0.0, 1.0, 2.0}) {
    auto [u, rep] = solve_ladder(constant_instance(mesh, eta), cfg);
    for (double v : u.values()) worst = std::max(worst, std::abs(v - 1.0));
  }
  const double secs = timer.seconds();
  report(1, "constant exact solution u = 1", worst <= 1e-9 && secs < 1.0,
         "max_err=" + fmt(worst), secs);
}

void criterion_2() {
  Timer timer;
  SolverConfig cfg;
  std::vector<double> errs;
  for (int m : {8, 16, 32}) {
    auto mesh = generate_unit_square(m);
    auto [u, rep] = solve_ladder(manufactured_instance(mesh), cfg);
    double err = 0.0;
    for (int i = 0; i < u.size(); ++i) {
      err = std::max(err, std::abs(u[i] - (2.0 + mesh->vertices()[i].x)));
    }
    errs.push_back(err);
  }
  const double rate = 0.5 * std::log2(errs.front() / errs.back());
  const double secs = timer.seconds();
  report(2, "manufactured u = 2+x converges at rate >= 1.9", rate >= 1.9 && secs < 30.0,
         "rate=" + fmt(rate) + " errs=" + fmt(errs[0]) + "," + fmt(errs[1]) + "," + fmt(errs[2]),
         secs);
}

void criterion_3() {
  Timer timer;
  bool ok = true;
  std::string detail;
  for (double alpha : {0.0, 0.5}) {
    auto mesh = generate_unit_disk(16);
    std::vector<double> res;
    for (int step = 0; step < 4; ++step) {  // base + three refinements
      auto [spec, u] = exact_disk_example(alpha, mesh, 8);
      res.push_back(scaled_weak_residual(*spec, u));
      if (step < 3) mesh = refine_uniform(*mesh);
    }
    for (size_t i = 1; i < res.size(); ++i) ok = ok && res[i] < res[i - 1];
    ok = ok && res.back() <= 1e-2;
    detail += "alpha=" + fmt(alpha) + ":" + fmt(res.back()) + " ";
  }
  const double secs = timer.seconds();
  report(3, "exact disk residual decreases and ends below 1e-2", ok && secs < 60.0, detail,
         secs);
}

void criterion_4() {
  Timer timer;
  auto disk = generate_unit_disk(12);
  ProblemPtr spec = model_instance(
      disk, ScalarFunctionSpec::point_power(1.0, 0.9, {std::cos(1.0), std::sin(1.0)}));
  SolverConfig cfg;
  cfg.tol_ladder = 0.0;
  cfg.schedule.clear();
  for (double n = 1.0; n <= 256.0; n += 1.0) cfg.schedule.push_back(n);
  LadderRun run = run_ladder_collect(spec, cfg);
  double worst = 0.0;
  bool ok = !run.failed && disk->is_delaunay();
  for (size_t l = 0; l + 1 < run.fields.size(); ++l) {
    for (int i = 0; i < disk->vertex_count(); ++i) {
      worst = std::min(worst, run.fields[l + 1][i] - run.fields[l][i]);
    }
  }
  ok = ok && worst >= -1e-8;
  report(4, "warm-started ladder nondecreasing over n = 1..256", ok,
         "min_increment=" + fmt(worst), timer.seconds());
}

void criterion_5() {
  Timer timer;
  auto mesh = generate_unit_square(8);
  ProblemPtr spec = model_instance(mesh, ScalarFunctionSpec::constant(1.0));
  SolverConfig cfg;
  cfg.tol_ladder = 0.0;
  cfg.schedule = {1, 2, 4, 8, 16, 32, 64, 128, 256};
  auto [v, cbar] = solve_barrier(*spec, cfg);
  LadderRun run = run_ladder_collect(spec, cfg);
  double worst = kInfinity;
  for (const auto& uf : run.fields) {
    for (int i = 0; i < uf.size(); ++i) {
      if (mesh->boundary_vertex_flags()[i]) worst = std::min(worst, uf[i] - v[i]);
    }
  }
  const bool ok = !run.failed && cbar > 0.0 && worst >= -1e-8;
  report(5, "every level dominates the positive barrier on the boundary", ok,
         "cbar=" + fmt(cbar) + " min_gap=" + fmt(worst), timer.seconds());
}

void criterion_6() {
  Timer timer;
  SolverConfig cfg;
  cfg.tol_ladder = 0.0;
  cfg.schedule = {16, 64, 256};
  std::vector<double> cs;
  std::vector<double> k_grid;
  bool solver_ok = true;
  auto disk = generate_unit_disk(12);
  for (int res = 0; res < 2; ++res) {
    ProblemPtr spec = singular_demo(disk);
    LadderRun run = run_ladder_collect(spec, cfg);
    solver_ok = solver_ok && !run.failed;
    if (run.failed) break;
    if (k_grid.empty()) {
      const double umax = run.fields.back().max_abs();
      k_grid = log_spaced(0.01 * umax, 4.0 * umax, 40);
    }
    for (const auto& uf : run.fields) {
      cs.push_back(truncation_energy_constant(uf, *spec, k_grid));
    }
    disk = refine_uniform(*disk);
  }
  const bool ok = solver_ok && within_factor(cs, 2.0);
  std::string detail = "C=";
  for (double c : cs) detail += fmt(c) + " ";
  report(6, "truncation-energy constant stable (factor 2, p = 1.5)", ok, detail,
         timer.seconds());
}

void criterion_7() {
  Timer timer;
  auto disk = generate_unit_disk(12);
  ProblemPtr spec = singular_demo(disk);
  SolverConfig cfg;
  cfg.tol_ladder = 0.0;
  cfg.schedule = {16, 32, 64, 128, 256, 512, 1024};
  LadderRun run = run_ladder_collect(spec, cfg);
  bool ok = !run.failed;
  std::vector<double> absorptions, sources;
  double worst_defect = 0.0;
  for (size_t l = 0; l < run.fields.size() && ok; ++l) {
    const BoundaryBalance b = boundary_l1_balance(run.fields[l], regularize(spec, run.levels[l]));
    absorptions.push_back(b.absorption);
    sources.push_back(std::abs(b.source));
    const double scale = std::max({1.0, b.absorption, b.load + std::abs(b.source)});
    worst_defect = std::max(worst_defect, std::abs(b.defect) / scale);
  }
  ok = ok && within_factor(absorptions, 2.0) && within_factor(sources, 2.0) &&
       worst_defect <= 1e-8;
  report(7, "boundary L1 integrals bounded, mass balance <= 1e-8", ok,
         "defect=" + fmt(worst_defect), timer.seconds());
}

void criterion_8() {
  Timer timer;
  auto disk = generate_unit_disk(12);
  ProblemPtr spec = singular_demo(disk);
  SolverConfig cfg;
  cfg.tol_ladder = 0.0;
  cfg.schedule = {16, 32, 64, 128, 256, 512, 1024};
  LadderRun run = run_ladder_collect(spec, cfg);
  bool ok = !run.failed;
  for (size_t l = 0; l < run.fields.size() && ok; ++l) {
    const double umax = run.fields[l].max_abs();
    const auto t_grid = log_spaced(umax * 1e-3, umax, 10);
    const auto rep =
        absorption_estimate_check(run.fields[l], regularize(spec, run.levels[l]), t_grid, 1e-8);
    ok = ok && rep.all_pass();
  }
  report(8, "absorption inequality at 10 thresholds on every level", ok, "", timer.seconds());
}

void criterion_9() {
  Timer timer;
  SolverConfig cfg;

  // Exact-in-discrete-space instance: residual <= 1e-6.
  auto mesh = generate_unit_square(8);
  ProblemPtr spec = constant_instance(mesh, 1.0);
  auto [u, rep] = solve_ladder(spec, cfg);
  double worst = 0.0;
  std::vector<std::pair<const char*, DiscreteField>> tests;
  tests.push_back({"0", DiscreteField(mesh, 0.0)});
  DiscreteField t1(mesh, 0.0), cx(mesh, 0.0);
  for (int i = 0; i < u.size(); ++i) {
    t1[i] = truncate(u[i], 1.0);
    cx[i] = mesh->vertices()[i].x;
  }
  tests.push_back({"T1u", std::move(t1)});
  tests.push_back({"x", std::move(cx)});
  bool ok = true;
  for (const auto& [name, v] : tests) {
    for (double k : {0.5, 1.0, 2.0}) {
      const EntropyResidual er = entropy_residual(u, v, k, *spec);
      ok = ok && er.applicable;
      worst = std::max(worst, er.residual);
    }
  }
  ok = ok && worst <= 1e-6;

  // Ladder instance: residual decreases under refinement.
  auto resid = [&cfg](MeshPtr disk) {
    ProblemPtr s = singular_demo(disk, 1.5);
    SolverConfig c = cfg;
    c.tol_ladder = 0.0;
    c.schedule = {16, 64, 256};
    auto [uu, rr] = solve_ladder(s, c);
    double r = 0.0;
    for (double k : {0.5, 1.0, 2.0}) {
      const EntropyResidual er = entropy_residual(uu, DiscreteField(disk, 0.0), k, *s);
      r = std::max(r, er.residual);
    }
    return r;
  };
  const double r_coarse = resid(generate_unit_disk(12));
  const double r_fine = resid(refine_uniform(*generate_unit_disk(12)));
  ok = ok && r_fine < r_coarse;

  report(9, "entropy residual <= 1e-6 (exact instance) and decreasing", ok,
         "exact=" + fmt(worst) + " coarse=" + fmt(r_coarse) + " fine=" + fmt(r_fine),
         timer.seconds());
}

void criterion_10() {
  Timer timer;
  SolverConfig cfg;
  cfg.schedule = {1, 2, 4, 8, 16, 32, 64};
  bool ok = true;
  double worst = 0.0;
  auto mesh = generate_unit_square(8);
  for (ProblemPtr spec : {constant_instance(mesh, 1.0), manufactured_instance(mesh)}) {
    const auto rep = uniqueness_crosscheck(spec, cfg);
    ok = ok && rep.all_pass() && rep.checks.front().status == CheckStatus::Pass;
    worst = std::max(worst, rep.checks.front().measured);
  }
  ok = ok && worst <= 1e-8;
  report(10, "cross-initialized solves agree within 1e-8", ok, "max_diff=" + fmt(worst),
         timer.seconds());
}

void criterion_11() {
  Timer timer;
  auto mesh = generate_unit_square(4);
  const double eps = 1e-6;
  bool ok = true;
  double worst = 0.0;
  for (double p : {1.5, 2.0, 3.0}) {
    auto spec = std::make_shared<ProblemSpec>(*constant_instance(mesh, 1.0));
    spec->flux.p = p;
    SigmaSpec sigma;
    sigma.exponent = std::max(p - 1.0, 1.0);
    spec->sigma = sigma;
    const RegularizedProblem rp = regularize(spec, 1e6);  // far from truncation kinks
    Assembler asmb(rp);
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> d(-0.05, 0.05);
    DiscreteField u(mesh, 0.0);
    // affine base keeps gradients away from the p < 2 degeneracy
    for (int i = 0; i < u.size(); ++i) u[i] = 2.0 + mesh->vertices()[i].x + d(rng);
    const Eigen::VectorXd r0 = asmb.residual(u);
    const Eigen::SparseMatrix<double> J = asmb.jacobian(u).to_eigen();
    std::uniform_int_distribution<int> pick(0, mesh->vertex_count() - 1);
    for (int trial = 0; trial < 20; ++trial) {
      const int j = pick(rng);
      DiscreteField up = u;
      up[j] += eps;
      const Eigen::VectorXd fd = (asmb.residual(up) - r0) / eps;
      const double discrepancy = (fd - Eigen::VectorXd(J.col(j))).norm();
      worst = std::max(worst, discrepancy);
      ok = ok && discrepancy <= 1e-5;
    }
  }
  report(11, "Jacobian matches finite differences (p in {1.5,2,3})", ok,
         "max_discrepancy=" + fmt(worst), timer.seconds());
}

void criterion_12() {
  Timer timer;
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> d(0.0, 7.0);
  std::vector<double> vals(500), meas(500);
  for (int i = 0; i < 500; ++i) {
    vals[i] = d(rng);
    meas[i] = 0.002;
  }
  const double base = marcinkiewicz_quasinorm(vals, meas, 2.0).sup;
  bool ok = base > 0.0;
  double worst = 0.0;
  for (double s : {0.1, 10.0}) {
    std::vector<double> scaled = vals;
    for (double& v : scaled) v *= s;
    const double got = marcinkiewicz_quasinorm(scaled, meas, 2.0).sup;
    const double rel = std::abs(got - s * base) / (s * base);
    worst = std::max(worst, rel);
    ok = ok && rel <= 1e-10;
  }
  report(12, "quasi-norm homogeneity under value scaling", ok, "rel_err=" + fmt(worst),
         timer.seconds());
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11();
  criterion_12();
  if (failures == 0) {
    std::printf("acceptance: all 12 criteria PASS\n");
  } else {
    std::printf("acceptance: %d criterion(s) FAILED\n", failures);
  }
  return failures == 0 ? 0 : 1;
}
