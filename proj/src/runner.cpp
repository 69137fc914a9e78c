#include "robinfem/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "robinfem/assembly.hpp"

namespace robinfem {

namespace fs = std::filesystem;

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string hash_hex(const RunConfig& cfg) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "0x%016llx",
                static_cast<unsigned long long>(config_hash(cfg)));
  return buf;
}

std::ofstream open_artifact(const std::string& out_dir, const std::string& name) {
  fs::create_directories(out_dir);
  std::ofstream os(fs::path(out_dir) / name);
  if (!os) throw std::runtime_error("cannot open artifact " + name + " in " + out_dir);
  return os;
}

DiscreteField interpolate(const AnalyticField& u, MeshPtr mesh) {
  std::vector<double> vals(mesh->vertex_count());
  for (int i = 0; i < mesh->vertex_count(); ++i) vals[i] = u.value(mesh->vertices()[i]);
  return {mesh, std::move(vals)};
}

int report_validation(const ProblemSpec& spec, std::uint64_t seed, bool quiet) {
  const auto issues = spec.validate(seed);
  if (issues.empty()) return 0;
  for (const auto& msg : issues) std::cerr << "error: " << msg << "\n";
  if (!quiet) std::cerr << issues.size() << " problem validation error(s)\n";
  return 1;
}

}  // namespace

std::vector<std::string> provenance(const RunConfig& cfg, const std::string& subcommand) {
  std::vector<std::string> lines;
  lines.push_back("robinfem " + subcommand);
  lines.push_back("config_hash=" + hash_hex(cfg));
  lines.push_back("mesh=" + cfg.mesh_domain + " m=" + std::to_string(cfg.mesh_m) +
                  " refine=" + std::to_string(cfg.mesh_refine));
  lines.push_back("tol_res=" + fmt17(cfg.solver_tol_res) + " tol_fp=" + fmt17(cfg.solver_tol_fp) +
                  " tol_ladder=" + fmt17(cfg.solver_tol_ladder) +
                  " lin_tol=" + fmt17(cfg.solver_lin_tol));
  lines.push_back("seed=" + std::to_string(cfg.seed));
  return lines;
}

LadderRun run_ladder_collect(ProblemPtr spec, const SolverConfig& config) {
  LadderRun out;
  DiscreteField u(spec->mesh, 0.0);
  bool first = true;
  for (double n : config.effective_schedule()) {
    const RegularizedProblem rp = regularize(spec, n);
    try {
      auto [u_next, rep] = solve_level(rp, config, u);
      const double change = first ? kInfinity : u_next.max_abs_diff(u);
      if (!first) out.report.level_changes.push_back(change);
      out.report.levels.push_back(rep);
      out.report.final_level = n;
      out.levels.push_back(n);
      u = u_next;
      out.fields.push_back(u);
      if (!first && config.tol_ladder > 0.0 && change <= config.tol_ladder) {
        out.report.ladder_converged = true;
        break;
      }
      first = false;
    } catch (const SolverError& err) {
      out.failed = true;
      out.failure = err.what();
      out.report.levels.push_back(err.report);
      break;
    }
  }
  return out;
}

int run_solve(const RunConfig& cfg, const std::string& out_dir, bool quiet) {
  MeshPtr mesh = build_mesh(cfg);
  ProblemPtr spec = build_problem(cfg, mesh);
  if (int rc = report_validation(*spec, cfg.seed, quiet)) return rc;
  const SolverConfig solver = build_solver_config(cfg);
  const auto header = provenance(cfg, "solve");

  LadderRun run = run_ladder_collect(spec, solver);
  {
    auto os = open_artifact(out_dir, "report.csv");
    run.report.write_csv(os, header);
  }
  std::ostringstream summary;
  summary << "robinfem solve\nconfig_hash=" << hash_hex(cfg) << "\n";
  for (size_t i = 0; i < run.report.levels.size(); ++i) {
    const auto& lev = run.report.levels[i];
    summary << "level n=" << fmt17(lev.level) << " iters=" << lev.iterations
            << " converged=" << (lev.converged ? 1 : 0) << " min_node=" << fmt17(lev.min_node)
            << " min_boundary=" << fmt17(lev.min_boundary_node)
            << " mass_defect=" << fmt17(lev.mass_defect) << " wall_s=" << lev.wall_seconds
            << "\n";
  }
  if (!run.fields.empty()) {
    const DiscreteField& u = run.fields.back();
    {
      auto os = open_artifact(out_dir, "solution.csv");
      u.write_csv(os, header);
    }
    {
      auto os = open_artifact(out_dir, "solution.vtk");
      u.write_vtk(os, "u", "robinfem solve config_hash=" + hash_hex(cfg));
    }
    {
      auto os = open_artifact(out_dir, "mesh.txt");
      mesh->write_text(os);
    }
    summary << "final_level=" << fmt17(run.report.final_level)
            << " ladder_converged=" << (run.report.ladder_converged ? 1 : 0) << "\n";
  }
  if (run.failed) summary << "FAILED: " << run.failure << "\n";
  {
    auto os = open_artifact(out_dir, "summary.txt");
    os << summary.str();
  }
  if (!quiet) std::cout << summary.str();
  return run.failed ? 1 : 0;
}

namespace {

struct RateTable {
  std::string study;
  std::vector<int> m;
  std::vector<double> h;
  std::vector<double> error;
  std::vector<double> rate;  // rate[0] = 0
};

void append_rows(std::ostream& os, const RateTable& t) {
  for (size_t i = 0; i < t.error.size(); ++i) {
    os << t.study << "," << t.m[i] << "," << fmt17(t.h[i]) << "," << fmt17(t.error[i]) << ","
       << fmt17(t.rate[i]) << "\n";
  }
}

void fill_rates(RateTable& t) {
  t.rate.assign(t.error.size(), 0.0);
  for (size_t i = 1; i < t.error.size(); ++i) {
    if (t.error[i] > 0.0 && t.error[i - 1] > 0.0) {
      t.rate[i] = std::log2(t.error[i - 1] / t.error[i]);
    }
  }
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

ProblemPtr manufactured_affine_instance(MeshPtr mesh) {
  AnalyticField u;
  u.c = 2.0;
  u.ax = 1.0;  // u = 2 + x
  return manufacture(u, ScalarFunctionSpec::constant(1.0), SigmaSpec{},
                     HSpec{HSpec::Family::PowerSingular, 1.0, 1.0}, FluxSpec{}, mesh, 1.0,
                     RegularizationMode::General);
}

}  // namespace

int run_verify(const RunConfig& cfg, const std::string& out_dir, bool quiet) {
  const SolverConfig solver = build_solver_config(cfg);
  const auto header = provenance(cfg, "verify");
  std::ostringstream summary;
  bool ok = true;

  auto os = open_artifact(out_dir, "rates.csv");
  for (const auto& h : header) os << "# " << h << "\n";
  os << "study,m,h,error,rate\n";

  // Constant exact solution, exact in the discrete space on every mesh.
  {
    RateTable t;
    t.study = "constant_eta=" + fmt17(cfg.problem_eta);
    int m = std::max(4, cfg.mesh_m);
    for (int step = 0; step < cfg.verify_refinements; ++step, m *= 2) {
      MeshPtr mesh = generate_unit_square(m);
      auto [u, rep] = solve_ladder(constant_instance(mesh, cfg.problem_eta), solver);
      double err = 0.0;
      for (double v : u.values()) err = std::max(err, std::abs(v - 1.0));
      t.m.push_back(m);
      t.h.push_back(mesh->max_edge_length());
      t.error.push_back(err);
      if (err > 1e-10) ok = false;
    }
    fill_rates(t);
    append_rows(os, t);
    summary << "constant study: max error " << fmt17(*std::max_element(t.error.begin(), t.error.end()))
            << (ok ? " (<= 1e-10)\n" : " EXCEEDS 1e-10\n");
  }

  // Manufactured u = 2 + x: second-order nodal convergence.
  {
    RateTable t;
    t.study = "manufactured_2px";
    int m = std::max(4, cfg.mesh_m);
    for (int step = 0; step < cfg.verify_refinements; ++step, m *= 2) {
      MeshPtr mesh = generate_unit_square(m);
      ProblemPtr spec = manufactured_affine_instance(mesh);
      auto [u, rep] = solve_ladder(spec, solver);
      AnalyticField ue;
      ue.c = 2.0;
      ue.ax = 1.0;
      const DiscreteField exact = interpolate(ue, mesh);
      t.m.push_back(m);
      t.h.push_back(mesh->max_edge_length());
      t.error.push_back(u.max_abs_diff(exact));
    }
    fill_rates(t);
    append_rows(os, t);
    const double final_rate = t.rate.back();
    summary << "manufactured study: final rate " << fmt17(final_rate);
    if (final_rate < 1.9) {
      ok = false;
      summary << " BELOW 1.9";
    }
    summary << "\n";
  }

  // Interpolated exact disk solution: scaled weak residual must decrease.
  for (double alpha : {0.0, 0.5}) {
    RateTable t;
    t.study = "disk_alpha=" + fmt17(alpha);
    MeshPtr mesh = generate_unit_disk(cfg.mesh_domain == "disk" ? cfg.mesh_m : 16);
    for (int step = 0; step <= cfg.verify_refinements; ++step) {
      auto [spec, u_exact] = exact_disk_example(alpha, mesh, 8);
      t.m.push_back(static_cast<int>(mesh->boundary_edges().size()));
      t.h.push_back(mesh->max_edge_length());
      t.error.push_back(scaled_weak_residual(*spec, u_exact));
      if (step < cfg.verify_refinements) mesh = refine_uniform(*mesh);
    }
    fill_rates(t);
    append_rows(os, t);
    bool decreasing = true;
    for (size_t i = 1; i < t.error.size(); ++i) {
      if (t.error[i] >= t.error[i - 1]) decreasing = false;
    }
    summary << t.study << ": residuals";
    for (double e : t.error) summary << " " << fmt17(e);
    if (!decreasing) {
      ok = false;
      summary << " NOT DECREASING";
    }
    if (t.error.back() > 1e-2) {
      ok = false;
      summary << " FINAL ABOVE 1e-2";
    }
    summary << "\n";
  }

  summary << (ok ? "verify: PASS\n" : "verify: FAIL\n");
  {
    auto sos = open_artifact(out_dir, "summary.txt");
    for (const auto& h : header) sos << "# " << h << "\n";
    sos << summary.str();
  }
  if (!quiet) std::cout << summary.str();
  return ok ? 0 : 1;
}

int run_estimates(const RunConfig& cfg, const std::string& out_dir, bool quiet) {
  MeshPtr mesh = build_mesh(cfg);
  ProblemPtr spec = build_problem(cfg, mesh);
  if (int rc = report_validation(*spec, cfg.seed, quiet)) return rc;
  const SolverConfig solver = build_solver_config(cfg);
  const auto header = provenance(cfg, "estimates");

  LadderRun run = run_ladder_collect(spec, solver);
  if (run.failed || run.fields.empty()) {
    auto os = open_artifact(out_dir, "estimates.csv");
    for (const auto& h : header) os << "# " << h << "\n";
    os << "solver failure: " << run.failure << "\n";
    if (!quiet) std::cerr << "estimates: solver failed: " << run.failure << "\n";
    return 1;
  }
  const DiscreteField& u_final = run.fields.back();
  const double umax = std::max(u_final.max_abs(), 1e-12);

  std::vector<EstimateReport> reports;

  // Mass balance and L1 boundedness across levels.
  {
    EstimateReport rep;
    rep.title = "boundary_l1_balance";
    rep.context = "levels " + fmt17(run.levels.front()) + ".." + fmt17(run.levels.back());
    std::vector<double> absorptions, sources;
    for (size_t l = 0; l < run.fields.size(); ++l) {
      const RegularizedProblem rp = regularize(spec, run.levels[l]);
      const BoundaryBalance b = boundary_l1_balance(run.fields[l], rp);
      absorptions.push_back(b.absorption);
      sources.push_back(std::abs(b.source));
      const double scale = std::max({1.0, b.absorption, b.load + std::abs(b.source)});
      CheckResult r;
      r.name = "mass balance defect at n=" + fmt17(run.levels[l]);
      r.measured = std::abs(b.defect) / scale;
      r.bound = 1e-8;
      r.tolerance = 1e-8;
      r.status = r.measured <= r.bound ? CheckStatus::Pass : CheckStatus::Fail;
      rep.add(std::move(r));
    }
    CheckResult ra;
    ra.name = "absorption L1 within factor 2 of first level";
    ra.measured = within_factor(absorptions, 2.0) ? 1.0 : 0.0;
    ra.bound = 1.0;
    ra.status = within_factor(absorptions, 2.0) ? CheckStatus::Pass : CheckStatus::Fail;
    rep.add(std::move(ra));
    CheckResult rs;
    rs.name = "source L1 within factor 2 of first level";
    const bool src_ok =
        within_factor(sources, 2.0) ||
        *std::max_element(sources.begin(), sources.end()) < 1e-12;  // all-zero source
    rs.measured = src_ok ? 1.0 : 0.0;
    rs.bound = 1.0;
    rs.status = src_ok ? CheckStatus::Pass : CheckStatus::Fail;
    rep.add(std::move(rs));
    reports.push_back(std::move(rep));
  }

  // Absorption superlevel inequality per level.
  {
    const auto t_grid = log_spaced(umax * 1e-3, umax, cfg.diag_t_count);
    for (size_t l = 0; l < run.fields.size(); ++l) {
      reports.push_back(absorption_estimate_check(run.fields[l],
                                                  regularize(spec, run.levels[l]), t_grid));
    }
  }

  // Truncation energy stability across levels.
  {
    const auto k_grid = log_spaced(0.01 * umax, 4.0 * umax, cfg.diag_grid_points);
    std::vector<std::pair<std::string, double>> cs;
    for (size_t l = 0; l < run.fields.size(); ++l) {
      cs.push_back({"n=" + fmt17(run.levels[l]),
                    truncation_energy_constant(run.fields[l], *spec, k_grid)});
    }
    reports.push_back(truncation_energy_stability(cs));
  }

  // Marcinkiewicz quasi-norm boundedness (interior/boundary/gradient) and
  // homogeneity.
  if (spec->flux.p < spec->dimN) {
    const MarcinkiewiczExponents ex = marcinkiewicz_exponents(spec->dimN, spec->flux.p);
    EstimateReport rep;
    rep.title = "marcinkiewicz";
    rep.context = "r_int=" + fmt17(ex.interior) + " r_bnd=" + fmt17(ex.boundary) +
                  " r_grad=" + fmt17(ex.gradient);
    std::vector<double> qn_int, qn_bnd, qn_grad;
    for (const auto& uf : run.fields) {
      qn_int.push_back(marcinkiewicz_quasinorm(uf.values(), mesh->lumped_interior_measure(),
                                               ex.interior, cfg.diag_grid_points)
                           .sup);
      std::vector<double> bvals, bmeas;
      for (int i = 0; i < uf.size(); ++i) {
        if (mesh->boundary_vertex_flags()[i]) {
          bvals.push_back(uf[i]);
          bmeas.push_back(mesh->lumped_boundary_measure()[i]);
        }
      }
      qn_bnd.push_back(marcinkiewicz_quasinorm(bvals, bmeas, ex.boundary,
                                               cfg.diag_grid_points)
                           .sup);
      std::vector<double> gvals, gmeas;
      for (int t = 0; t < mesh->triangle_count(); ++t) {
        const auto& tri = mesh->triangles()[t];
        const auto grads = mesh->shape_gradients(t);
        Vec2 gv{0.0, 0.0};
        for (int k = 0; k < 3; ++k) gv = gv + grads[k] * uf[tri[k]];
        gvals.push_back(gv.norm());
        gmeas.push_back(mesh->triangle_area(t));
      }
      qn_grad.push_back(marcinkiewicz_quasinorm(gvals, gmeas, ex.gradient,
                                                cfg.diag_grid_points)
                            .sup);
    }
    auto add_bounded = [&](const char* name, const std::vector<double>& q) {
      CheckResult r;
      r.name = name;
      r.measured = q.empty() ? 0.0 : q.back();
      r.bound = 2.0;
      const bool all_zero = *std::max_element(q.begin(), q.end()) == 0.0;
      r.status = (all_zero || within_factor(q, 2.0)) ? CheckStatus::Pass : CheckStatus::Fail;
      rep.add(std::move(r));
    };
    add_bounded("interior quasi-norm bounded across levels", qn_int);
    add_bounded("boundary quasi-norm bounded across levels", qn_bnd);
    add_bounded("gradient quasi-norm bounded across levels", qn_grad);

    for (double s : {0.1, 10.0}) {
      std::vector<double> scaled = u_final.values();
      for (double& v : scaled) v *= s;
      const double base =
          marcinkiewicz_quasinorm(u_final.values(), mesh->lumped_interior_measure(),
                                  ex.interior, cfg.diag_grid_points)
              .sup;
      const double got = marcinkiewicz_quasinorm(scaled, mesh->lumped_interior_measure(),
                                                 ex.interior, cfg.diag_grid_points)
                             .sup;
      CheckResult r;
      r.name = "homogeneity s=" + fmt17(s);
      r.measured = base > 0.0 ? std::abs(got - s * base) / (s * base) : 0.0;
      r.bound = 1e-10;
      r.tolerance = 1e-10;
      r.status = r.measured <= r.bound ? CheckStatus::Pass : CheckStatus::Fail;
      rep.add(std::move(r));
    }
    reports.push_back(std::move(rep));
  }

  // Entropy residual of the ladder limit against the bounded test family.
  {
    EstimateReport rep;
    rep.title = "entropy_residual";
    rep.context = "final field";
    std::vector<std::pair<std::string, DiscreteField>> tests;
    tests.push_back({"v=0", DiscreteField(mesh, 0.0)});
    DiscreteField t1(mesh, 0.0);
    for (int i = 0; i < u_final.size(); ++i) t1[i] = truncate(u_final[i], 1.0);
    tests.push_back({"v=T1(u)", std::move(t1)});
    DiscreteField cx(mesh, 0.0), cy(mesh, 0.0);
    for (int i = 0; i < u_final.size(); ++i) {
      cx[i] = mesh->vertices()[i].x;
      cy[i] = mesh->vertices()[i].y;
    }
    tests.push_back({"v=x", std::move(cx)});
    tests.push_back({"v=y", std::move(cy)});
    for (const auto& [name, v] : tests) {
      for (double k : {0.5, 1.0, 2.0}) {
        const EntropyResidual er = entropy_residual(u_final, v, k, *spec);
        CheckResult r;
        r.name = "residual " + name + " k=" + fmt17(k);
        r.measured = er.residual;
        r.status = CheckStatus::Info;
        r.detail = er.applicable ? "applicable"
                                 : "inapplicable (u=0 on {g>0} at " +
                                       std::to_string(er.flagged_nodes) + " nodes)";
        rep.add(std::move(r));
      }
    }
    reports.push_back(std::move(rep));
  }

  // Ladder monotonicity (the discrete analogue is only expected for the
  // model scheme on Delaunay meshes; elsewhere it is reported as a finding).
  if (run.fields.size() >= 2) {
    EstimateReport rep;
    rep.title = "ladder_monotonicity";
    double worst = 0.0;
    for (size_t l = 0; l + 1 < run.fields.size(); ++l) {
      for (int i = 0; i < u_final.size(); ++i) {
        worst = std::min(worst, run.fields[l + 1][i] - run.fields[l][i]);
      }
    }
    const bool expected = spec->mode == RegularizationMode::Model && mesh->is_delaunay();
    CheckResult r;
    r.name = "min over levels of min_i(u_{next} - u)";
    r.measured = worst;
    r.bound = -1e-8;
    r.tolerance = 1e-8;
    r.status = expected ? (worst >= -1e-8 ? CheckStatus::Pass : CheckStatus::Fail)
                        : CheckStatus::Info;
    r.detail = expected ? "model scheme on Delaunay mesh" : "finding only";
    rep.add(std::move(r));
    reports.push_back(std::move(rep));
  }

  // Nonnegativity diagnostic (never clamped, only reported).
  {
    EstimateReport rep;
    rep.title = "nonnegativity";
    CheckResult r;
    r.name = "min nodal value of final field";
    r.measured = u_final.min_value();
    r.bound = -1e-8;
    r.tolerance = 1e-8;
    r.status = r.measured >= -1e-8 ? CheckStatus::Pass : CheckStatus::Fail;
    rep.add(std::move(r));
    reports.push_back(std::move(rep));
  }

  // Barrier bound for bounded lambda in model mode.
  if (spec->mode == RegularizationMode::Model) {
    EstimateReport rep;
    rep.title = "barrier";
    if (spec->lambda.has_singular_point()) {
      CheckResult r;
      r.name = "sub-solution barrier";
      r.status = CheckStatus::Refused;
      r.detail = "lambda unbounded; barrier inapplicable";
      rep.add(std::move(r));
    } else {
      auto [v, cbar] = solve_barrier(*spec, solver);
      const RegularizedProblem rp1 = regularize(spec, 1.0);
      const double load1 = Assembler(rp1).load_integral();
      CheckResult rc;
      rc.name = "cbar = min boundary barrier value";
      rc.measured = cbar;
      rc.bound = 0.0;
      rc.status = load1 > 1e-14 ? (cbar > 0.0 ? CheckStatus::Pass : CheckStatus::Fail)
                                : CheckStatus::Info;
      rc.detail = load1 > 1e-14 ? "" : "zero datum: barrier degenerate";
      rep.add(std::move(rc));
      double worst = kInfinity;
      for (const auto& uf : run.fields) {
        for (int i = 0; i < uf.size(); ++i) {
          if (mesh->boundary_vertex_flags()[i]) worst = std::min(worst, uf[i] - v[i]);
        }
      }
      CheckResult rb;
      rb.name = "u_n >= barrier - 1e-8 at boundary vertices, all levels";
      rb.measured = worst;
      rb.bound = -1e-8;
      rb.tolerance = 1e-8;
      rb.status = worst >= -1e-8 ? CheckStatus::Pass : CheckStatus::Fail;
      rep.add(std::move(rb));
    }
    reports.push_back(std::move(rep));
  }

  reports.push_back(uniqueness_crosscheck(spec, solver));

  bool ok = true;
  {
    auto os = open_artifact(out_dir, "estimates.csv");
    for (const auto& h : header) os << "# " << h << "\n";
    os << "report,context,check,measured,bound,tolerance,status,detail\n";
    for (const auto& rep : reports) {
      std::ostringstream tmp;
      rep.write_csv(tmp);
      std::string body = tmp.str();
      body.erase(0, body.find('\n') + 1);  // drop the per-report header row
      os << body;
      if (!rep.all_pass()) ok = false;
    }
  }
  {
    auto os = open_artifact(out_dir, "summary.txt");
    for (const auto& h : header) os << "# " << h << "\n";
    for (const auto& rep : reports) rep.write_summary(os);
    os << (ok ? "estimates: PASS\n" : "estimates: FAIL\n");
    if (!quiet) {
      for (const auto& rep : reports) rep.write_summary(std::cout);
      std::cout << (ok ? "estimates: PASS\n" : "estimates: FAIL\n");
    }
  }
  return ok ? 0 : 1;
}

int run_sweep(const RunConfig& cfg, const std::string& out_dir, bool quiet) {
  if (cfg.sweep_parameter.empty()) {
    std::cerr << "sweep: sweep.parameter not set\n";
    return 1;
  }
  const auto header = provenance(cfg, "sweep");
  auto os = open_artifact(out_dir, "sweep.csv");
  for (const auto& h : header) os << "# " << h << "\n";
  os << "index,parameter,value,final_level,levels,min_node,mass_defect,converged\n";

  bool all_ok = true;
  for (size_t i = 0; i < cfg.sweep_values.size(); ++i) {
    RunConfig c = cfg;
    const double v = cfg.sweep_values[i];
    if (cfg.sweep_parameter == "eta") {
      c.problem_eta = v;
      if (c.h_eta >= 0.0) c.h_eta = v;
    } else if (cfg.sweep_parameter == "alpha") {
      c.lambda.alpha = v;
      c.g.alpha = v;
    } else if (cfg.sweep_parameter == "p") {
      c.flux_p = v;
    } else if (cfg.sweep_parameter == "n_max") {
      c.solver_n_max = v;
      c.solver_schedule.clear();
    }
    int converged = 0;
    double final_level = 0.0, min_node = 0.0, defect = 0.0;
    int levels = 0;
    try {
      MeshPtr mesh = build_mesh(c);
      ProblemPtr spec = build_problem(c, mesh);
      const auto issues = spec->validate(c.seed);
      if (!issues.empty()) throw std::runtime_error(issues.front());
      LadderRun run = run_ladder_collect(spec, build_solver_config(c));
      if (!run.failed && !run.fields.empty()) {
        converged = 1;
        final_level = run.report.final_level;
        min_node = run.fields.back().min_value();
        defect = run.report.levels.back().mass_defect;
        levels = static_cast<int>(run.levels.size());
        auto sol = open_artifact(out_dir + "/sweep_" + std::to_string(i), "solution.csv");
        run.fields.back().write_csv(sol, provenance(c, "sweep"));
      }
    } catch (const std::exception& e) {
      if (!quiet) std::cerr << "sweep point " << i << " failed: " << e.what() << "\n";
    }
    if (!converged) all_ok = false;
    os << i << "," << cfg.sweep_parameter << "," << fmt17(v) << "," << fmt17(final_level) << ","
       << levels << "," << fmt17(min_node) << "," << fmt17(defect) << "," << converged << "\n";
  }
  if (!quiet) std::cout << "sweep: " << cfg.sweep_values.size() << " points, "
                        << (all_ok ? "all converged" : "some failed") << "\n";
  return all_ok ? 0 : 1;
}

}  // namespace robinfem
