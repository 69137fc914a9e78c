#include <doctest.h>

#include <cmath>
#include <sstream>

#include "robinfem/runner.hpp"
#include "robinfem/solver.hpp"

using namespace robinfem;

namespace {

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

// Model instance with an L1-only boundary source singular at one point.
ProblemPtr singular_model_instance(MeshPtr disk) {
  auto spec = std::make_shared<ProblemSpec>();
  spec->mesh = disk;
  spec->flux = FluxSpec{};
  spec->f = ScalarFunctionSpec::constant(1.0);
  spec->lambda = ScalarFunctionSpec::constant(1.0);
  spec->g = ScalarFunctionSpec::point_power(1.0, 0.9, {std::cos(1.0), std::sin(1.0)});
  spec->sigma = SigmaSpec{};
  spec->h = HSpec{HSpec::Family::PowerSingular, 1.0, 1.0};
  spec->eta = 1.0;
  spec->mode = RegularizationMode::Model;
  return spec;
}

}  // namespace

TEST_CASE("schauder map: zero data give the zero field") {
  auto mesh = generate_unit_square(4);
  auto spec = std::make_shared<ProblemSpec>(*constant_instance(mesh, 1.0));
  spec->g = ScalarFunctionSpec::constant(0.0);
  const RegularizedProblem rp = regularize(spec, 4.0);
  const DiscreteField w = schauder_map(rp, DiscreteField(mesh, 0.5), SolverConfig{});
  CHECK(w.max_abs() <= 1e-11);
}

TEST_CASE("schauder map: model constant problem at huge level gives w = 1") {
  auto mesh = generate_unit_square(8);
  auto spec = std::make_shared<ProblemSpec>(*constant_instance(mesh, 1.0));
  spec->mode = RegularizationMode::Model;
  const RegularizedProblem rp = regularize(spec, 1e12);
  const DiscreteField w = schauder_map(rp, DiscreteField(mesh, 1.0), SolverConfig{});
  for (double v : w.values()) CHECK(std::abs(v - 1.0) <= 1e-9);
}

TEST_CASE("schauder map: nonnegative frozen source keeps w nonnegative") {
  // Delaunay meshes: the p = 2 operator is an M-matrix, checked empirically.
  for (auto mesh : {generate_unit_square(6), generate_unit_disk(16)}) {
    auto spec = std::make_shared<ProblemSpec>(*constant_instance(mesh, 1.0));
    spec->mode = RegularizationMode::Model;
    const RegularizedProblem rp = regularize(spec, 8.0);
    const DiscreteField w = schauder_map(rp, DiscreteField(mesh, 0.3), SolverConfig{});
    CHECK(w.min_value() >= -1e-10);
  }
}

TEST_CASE("constant instance: Newton converges to u = 1 in at most 3 iterations") {
  auto mesh = generate_unit_square(8);
  for (double eta : {0.0, 1.0, 2.0}) {
    const RegularizedProblem rp = regularize(constant_instance(mesh, eta), 16.0);
    SolverConfig cfg;
    auto [u, rep] = solve_level(rp, cfg, DiscreteField(mesh, 1.0));
    CHECK(rep.converged);
    CHECK(rep.iterations <= 3);
    for (double v : u.values()) CHECK(std::abs(v - 1.0) <= 1e-10);
  }
}

TEST_CASE("manufactured u = 2 + x is exact in the discrete space") {
  // the affine trace is integrated exactly by the edge quadrature, so the
  // interpolant solves the discrete problem to solver tolerance
  SolverConfig cfg;
  for (int m : {8, 16}) {
    auto mesh = generate_unit_square(m);
    auto [u, rep] = solve_ladder(manufactured_instance(mesh), cfg);
    double err = 0.0;
    for (int i = 0; i < u.size(); ++i) {
      err = std::max(err, std::abs(u[i] - (2.0 + mesh->vertices()[i].x)));
    }
    CHECK(err <= 1e-10);
  }
}

TEST_CASE("curved manufactured solution converges under refinement") {
  AnalyticField ue;  // u = 2 + x - (x^2 + y^2)/4, f = 1
  ue.c = 2.0;
  ue.ax = 1.0;
  ue.qxx = -0.25;
  ue.qyy = -0.25;
  SolverConfig cfg;
  double prev_err = 0.0;
  for (int m : {8, 16}) {
    auto mesh = generate_unit_square(m);
    ProblemPtr spec = manufacture(ue, ScalarFunctionSpec::constant(1.0), SigmaSpec{},
                                  HSpec{HSpec::Family::PowerSingular, 1.0, 1.0}, FluxSpec{},
                                  mesh, 1.0);
    auto [u, rep] = solve_ladder(spec, cfg);
    double err = 0.0;
    for (int i = 0; i < u.size(); ++i) {
      err = std::max(err, std::abs(u[i] - ue.value(mesh->vertices()[i])));
    }
    if (prev_err > 0.0) {
      const double rate = std::log2(prev_err / err);
      CHECK(rate >= 1.5);  // nodal max norm carries an h^2 log h factor
    }
    prev_err = err;
  }
}

TEST_CASE("Picard and Newton modes agree") {
  auto mesh = generate_unit_square(8);
  for (ProblemPtr spec : {constant_instance(mesh, 1.0), manufactured_instance(mesh)}) {
    SolverConfig newton;
    SolverConfig picard;
    picard.mode = SolverConfig::Mode::Picard;
    const RegularizedProblem rp = regularize(spec, 64.0);
    auto [un, rn] = solve_level(rp, newton, DiscreteField(mesh, 1.0));
    auto [up, rpp] = solve_level(rp, picard, DiscreteField(mesh, 1.0));
    CHECK(un.max_abs_diff(up) <= 10.0 * std::max(newton.tol_res, picard.tol_fp) * 100.0);
    CHECK(un.max_abs_diff(up) <= 1e-8);
  }
}

TEST_CASE("ladder: bounded data make all levels beyond the data bound identical") {
  auto mesh = generate_unit_square(6);
  SolverConfig cfg;
  cfg.schedule = {1.0, 2.0, 4.0, 16.0, 64.0};
  cfg.tol_ladder = 0.0;  // keep every level
  LadderRun run = run_ladder_collect(constant_instance(mesh, 1.0), cfg);
  REQUIRE(run.fields.size() == 5);
  // data (lambda = g = 1, sigma(u) ~ u ~ 1) are below level 4 already
  CHECK(run.fields[3].max_abs_diff(run.fields[2]) <= 1e-9);
  CHECK(run.fields[4].max_abs_diff(run.fields[3]) <= 1e-9);
}

TEST_CASE("ladder fields are nondecreasing for the singular model instance") {
  auto disk = generate_unit_disk(12);
  REQUIRE(disk->is_delaunay());
  SolverConfig cfg;
  cfg.schedule.clear();
  for (double n = 1.0; n <= 32.0; n += 1.0) cfg.schedule.push_back(n);
  cfg.tol_ladder = 0.0;
  LadderRun run = run_ladder_collect(singular_model_instance(disk), cfg);
  REQUIRE(!run.failed);
  REQUIRE(run.fields.size() == 32);
  double worst = 0.0;
  for (size_t l = 0; l + 1 < run.fields.size(); ++l) {
    for (int i = 0; i < disk->vertex_count(); ++i) {
      worst = std::min(worst, run.fields[l + 1][i] - run.fields[l][i]);
    }
  }
  CHECK(worst >= -1e-8);
}

TEST_CASE("ladder limit independent of the schedule granularity") {
  auto mesh = generate_unit_square(6);
  SolverConfig doubling;
  doubling.schedule = {1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0};
  doubling.tol_ladder = 1e-10;
  SolverConfig tripling;
  tripling.schedule = {1.0, 3.0, 9.0, 27.0, 81.0};
  tripling.tol_ladder = 1e-10;
  auto [u2, r2] = solve_ladder(manufactured_instance(mesh), doubling);
  auto [u3, r3] = solve_ladder(manufactured_instance(mesh), tripling);
  CHECK(u2.max_abs_diff(u3) <= 10.0 * doubling.tol_ladder);
}

TEST_CASE("barrier: zero datum degenerates, positive datum separates from zero") {
  auto mesh = generate_unit_square(8);
  SolverConfig cfg;

  auto zero = std::make_shared<ProblemSpec>(*constant_instance(mesh, 1.0));
  zero->mode = RegularizationMode::Model;
  auto [v0, c0] = solve_barrier(*zero, cfg);
  CHECK(v0.max_abs() <= 1e-10);
  CHECK(std::abs(c0) <= 1e-10);

  auto pos = std::make_shared<ProblemSpec>(*zero);
  pos->f = ScalarFunctionSpec::constant(1.0);
  auto [v1, c1] = solve_barrier(*pos, cfg);
  CHECK(c1 > 0.0);

  // every ladder level dominates the barrier on the boundary
  SolverConfig lcfg;
  lcfg.schedule = {1.0, 2.0, 4.0, 8.0, 16.0};
  lcfg.tol_ladder = 0.0;
  LadderRun run = run_ladder_collect(pos, lcfg);
  for (const auto& uf : run.fields) {
    for (int i = 0; i < uf.size(); ++i) {
      if (mesh->boundary_vertex_flags()[i]) CHECK(uf[i] >= v1[i] - 1e-8);
    }
  }
}

TEST_CASE("max-iterations failures carry the iteration history") {
  auto mesh = generate_unit_square(4);
  const RegularizedProblem rp = regularize(manufactured_instance(mesh), 64.0);
  SolverConfig cfg;
  cfg.max_outer = 1;
  cfg.tol_res = 1e-15;
  try {
    solve_level(rp, cfg, DiscreteField(mesh, 0.0));
    FAIL("expected SolverError");
  } catch (const SolverError& e) {
    CHECK(!e.report.residual_history.empty());
    CHECK(e.report.iterations >= 1);
  }
}

TEST_CASE("newton residual history is monotone after damping acceptance") {
  auto mesh = generate_unit_square(6);
  const RegularizedProblem rp = regularize(manufactured_instance(mesh), 64.0);
  SolverConfig cfg;
  auto [u, rep] = solve_level(rp, cfg, DiscreteField(mesh, 0.0));
  for (size_t i = 1; i < rep.residual_history.size(); ++i) {
    CHECK(rep.residual_history[i] <= rep.residual_history[i - 1] * (1.0 + 1e-12));
  }
}

TEST_CASE("sign-changing instances are rejected by the ladder") {
  auto disk = generate_unit_disk(8);
  auto [spec, u] = exact_disk_example(0.0, disk);
  CHECK_THROWS_AS(solve_ladder(spec, SolverConfig{}), std::invalid_argument);
}

TEST_CASE("solve report CSV has one row per iteration") {
  auto mesh = generate_unit_square(4);
  SolverConfig cfg;
  cfg.schedule = {1.0, 4.0};
  cfg.tol_ladder = 0.0;
  auto [u, rep] = solve_ladder(constant_instance(mesh, 1.0), cfg);
  std::ostringstream os;
  rep.write_csv(os, {"robinfem test"});
  const std::string s = os.str();
  CHECK(s.rfind("# robinfem test", 0) == 0);
  CHECK(s.find("level,iter,residual,boundary_change,min_node") != std::string::npos);
}
