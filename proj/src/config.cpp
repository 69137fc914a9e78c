#include "robinfem/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>

namespace robinfem {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct Parser {
  RunConfig cfg;
  std::vector<ConfigError> errors;
  std::map<std::string, int> seen;  // key -> line
  int line = 0;

  void fail(const std::string& msg) { errors.push_back({line, msg}); }

  bool to_double(const std::string& v, double& out) {
    try {
      size_t pos = 0;
      out = std::stod(v, &pos);
      if (pos != v.size()) throw std::invalid_argument("");
      return true;
    } catch (...) {
      fail("expected a number, got '" + v + "'");
      return false;
    }
  }

  bool to_int(const std::string& v, int& out) {
    double d;
    if (!to_double(v, d)) return false;
    if (d != std::floor(d)) {
      fail("expected an integer, got '" + v + "'");
      return false;
    }
    out = static_cast<int>(d);
    return true;
  }

  bool to_bool(const std::string& v, bool& out) {
    if (v == "true" || v == "1") {
      out = true;
      return true;
    }
    if (v == "false" || v == "0") {
      out = false;
      return true;
    }
    fail("expected true/false, got '" + v + "'");
    return false;
  }

  bool to_list(const std::string& v, std::vector<double>& out) {
    out.clear();
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
      double d;
      if (!to_double(trim(item), d)) return false;
      out.push_back(d);
    }
    return true;
  }

  // "s1:v1,s2:v2,..." sample pairs for tabulated families.
  bool to_samples(const std::string& v, std::vector<std::pair<double, double>>& out) {
    out.clear();
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto colon = item.find(':');
      if (colon == std::string::npos) {
        fail("expected s:value pairs, got '" + item + "'");
        return false;
      }
      double s, val;
      if (!to_double(trim(item.substr(0, colon)), s) ||
          !to_double(trim(item.substr(colon + 1)), val)) {
        return false;
      }
      out.push_back({s, val});
    }
    std::sort(out.begin(), out.end());
    return true;
  }

  bool field_key(FieldConfig& f, const std::string& key, const std::string& v) {
    if (key == "family") {
      f.family = v;
      return true;
    }
    if (key == "value" || key == "scale") return to_double(v, f.value) || true;
    if (key == "alpha") return to_double(v, f.alpha) || true;
    if (key == "a0") return to_double(v, f.a0) || true;
    if (key == "ax") return to_double(v, f.ax) || true;
    if (key == "ay") return to_double(v, f.ay) || true;
    if (key == "x0") return to_double(v, f.x0) || true;
    if (key == "y0") return to_double(v, f.y0) || true;
    if (key == "coord") {
      f.coord = v;
      return true;
    }
    if (key == "samples") return to_samples(v, f.samples) || true;
    return false;
  }

  void handle(const std::string& key, const std::string& v) {
    seen[key] = line;
    const auto dot = key.find('.');
    const std::string section = dot == std::string::npos ? key : key.substr(0, dot);
    const std::string sub = dot == std::string::npos ? "" : key.substr(dot + 1);

    if (section == "f" && field_key(cfg.f, sub, v)) return;
    if (section == "lambda" && field_key(cfg.lambda, sub, v)) return;
    if (section == "g" && field_key(cfg.g, sub, v)) return;

    if (key == "mesh.domain") { cfg.mesh_domain = v; return; }
    if (key == "mesh.m") { to_int(v, cfg.mesh_m); return; }
    if (key == "mesh.refine") { to_int(v, cfg.mesh_refine); return; }
    if (key == "problem.mode") { cfg.problem_mode = v; return; }
    if (key == "problem.N") { to_int(v, cfg.problem_N); return; }
    if (key == "problem.eta") { to_double(v, cfg.problem_eta); return; }
    if (key == "problem.quad_order") { to_int(v, cfg.problem_quad_order); return; }
    if (key == "flux.family") { cfg.flux_family = v; return; }
    if (key == "flux.p") { to_double(v, cfg.flux_p); return; }
    if (key == "flux.w0") { to_double(v, cfg.flux_w0); return; }
    if (key == "flux.w1") { to_double(v, cfg.flux_w1); return; }
    if (key == "flux.w2") { to_double(v, cfg.flux_w2); return; }
    if (key == "sigma.family") { cfg.sigma_family = v; return; }
    if (key == "sigma.q") { to_double(v, cfg.sigma_q); return; }
    if (key == "sigma.scale") { to_double(v, cfg.sigma_scale); return; }
    if (key == "sigma.increasing") { to_bool(v, cfg.sigma_increasing); return; }
    if (key == "sigma.samples") { to_samples(v, cfg.sigma_samples); return; }
    if (key == "h.family") { cfg.h_family = v; return; }
    if (key == "h.eta") { to_double(v, cfg.h_eta); return; }
    if (key == "h.c1") { to_double(v, cfg.h_c1); return; }
    if (key == "h.s1") { to_double(v, cfg.h_s1); return; }
    if (key == "h.shift") { to_double(v, cfg.h_shift); return; }
    if (key == "h.nonincreasing") { to_bool(v, cfg.h_nonincreasing); return; }
    if (key == "h.samples") { to_samples(v, cfg.h_samples); return; }
    if (key == "exact.a0") { to_double(v, cfg.exact_a0); return; }
    if (key == "exact.ax") { to_double(v, cfg.exact_ax); return; }
    if (key == "exact.ay") { to_double(v, cfg.exact_ay); return; }
    if (key == "exact.qxx") { to_double(v, cfg.exact_qxx); return; }
    if (key == "exact.qxy") { to_double(v, cfg.exact_qxy); return; }
    if (key == "exact.qyy") { to_double(v, cfg.exact_qyy); return; }
    if (key == "solver.mode") { cfg.solver_mode = v; return; }
    if (key == "solver.tol_fp") { to_double(v, cfg.solver_tol_fp); return; }
    if (key == "solver.tol_res") { to_double(v, cfg.solver_tol_res); return; }
    if (key == "solver.tol_ladder") { to_double(v, cfg.solver_tol_ladder); return; }
    if (key == "solver.damping") { to_double(v, cfg.solver_damping); return; }
    if (key == "solver.lin_tol") { to_double(v, cfg.solver_lin_tol); return; }
    if (key == "solver.max_outer") { to_int(v, cfg.solver_max_outer); return; }
    if (key == "solver.n_max") { to_double(v, cfg.solver_n_max); return; }
    if (key == "solver.schedule") { to_list(v, cfg.solver_schedule); return; }
    if (key == "diag.grid_points") { to_int(v, cfg.diag_grid_points); return; }
    if (key == "diag.t_count") { to_int(v, cfg.diag_t_count); return; }
    if (key == "verify.refinements") { to_int(v, cfg.verify_refinements); return; }
    if (key == "sweep.parameter") { cfg.sweep_parameter = v; return; }
    if (key == "sweep.values") { to_list(v, cfg.sweep_values); return; }
    if (key == "run.seed") {
      double d;
      if (to_double(v, d)) cfg.seed = static_cast<std::uint64_t>(d);
      return;
    }
    fail("unknown key '" + key + "'");
  }

  int key_line(const std::string& key) const {
    auto it = seen.find(key);
    return it == seen.end() ? 0 : it->second;
  }

  void cross_validate() {
    for (const char* req : {"mesh.domain", "mesh.m", "flux.p", "problem.eta"}) {
      if (!seen.count(req)) errors.push_back({0, std::string("missing required key: ") + req});
    }
    auto check = [&](bool ok, const std::string& key, const std::string& msg) {
      if (!ok) errors.push_back({key_line(key), msg});
    };
    check(cfg.mesh_domain == "square" || cfg.mesh_domain == "disk", "mesh.domain",
          "mesh.domain must be square or disk");
    check(cfg.mesh_m >= 2, "mesh.m", "mesh.m must be >= 2");
    check(cfg.mesh_domain != "disk" || cfg.mesh_m >= 4, "mesh.m",
          "mesh.m must be >= 4 for the disk");
    check(cfg.mesh_refine >= 0, "mesh.refine", "mesh.refine must be >= 0");
    check(cfg.problem_mode == "model" || cfg.problem_mode == "general", "problem.mode",
          "problem.mode must be model or general");
    check(cfg.problem_N >= 2, "problem.N", "problem.N must be >= 2");
    check(cfg.problem_eta >= 0.0, "problem.eta", "problem.eta must be >= 0");
    check(cfg.problem_quad_order >= 1 && cfg.problem_quad_order <= 8, "problem.quad_order",
          "problem.quad_order must be in 1..8");
    check(cfg.flux_family == "p-laplacian" || cfg.flux_family == "weighted-p-laplacian",
          "flux.family", "flux.family must be p-laplacian or weighted-p-laplacian");
    check(cfg.flux_p > 1.0 && cfg.flux_p < static_cast<double>(cfg.problem_N), "flux.p",
          "p must lie in (1,N)");
    for (const auto* fc : {&cfg.f, &cfg.lambda, &cfg.g}) {
      const std::string name = fc == &cfg.f ? "f" : (fc == &cfg.lambda ? "lambda" : "g");
      static const std::vector<std::string> families = {
          "constant", "affine", "theta-power", "disk-example",
          "point-power", "tabulated", "manufactured"};
      check(std::find(families.begin(), families.end(), fc->family) != families.end(),
            name + ".family", name + ".family unknown: " + fc->family);
      check(fc->family != "tabulated" || !fc->samples.empty(), name + ".samples",
            name + ": tabulated family needs samples");
      check(fc->coord == "x" || fc->coord == "y" || fc->coord == "theta", name + ".coord",
            name + ".coord must be x, y or theta");
    }
    check(cfg.sigma_family == "power" || cfg.sigma_family == "tabulated", "sigma.family",
          "sigma.family must be power or tabulated");
    check(cfg.sigma_q >= 0.0, "sigma.q", "sigma.q must be >= 0");
    check(cfg.sigma_scale > 0.0, "sigma.scale", "sigma.scale must be positive");
    check(cfg.h_family == "power-singular" || cfg.h_family == "bounded" ||
              cfg.h_family == "rational" || cfg.h_family == "tabulated",
          "h.family", "h.family must be power-singular, bounded, rational or tabulated");
    check(cfg.h_c1 > 0.0, "h.c1", "h.c1 must be positive");
    check(cfg.h_s1 > 0.0, "h.s1", "h.s1 must be positive");
    check(cfg.h_shift > 0.0, "h.shift", "h.shift must be positive");
    check(cfg.solver_mode == "newton" || cfg.solver_mode == "picard", "solver.mode",
          "solver.mode must be newton or picard");
    check(cfg.solver_tol_fp > 0.0, "solver.tol_fp", "solver.tol_fp must be positive");
    check(cfg.solver_tol_res > 0.0, "solver.tol_res", "solver.tol_res must be positive");
    check(cfg.solver_tol_ladder >= 0.0, "solver.tol_ladder", "solver.tol_ladder must be >= 0");
    check(cfg.solver_damping > 0.0 && cfg.solver_damping <= 1.0, "solver.damping",
          "solver.damping must be in (0,1]");
    check(cfg.solver_lin_tol > 0.0, "solver.lin_tol", "solver.lin_tol must be positive");
    check(cfg.solver_max_outer >= 1, "solver.max_outer", "solver.max_outer must be >= 1");
    check(cfg.solver_n_max >= 1.0, "solver.n_max", "solver.n_max must be >= 1");
    for (size_t i = 0; i < cfg.solver_schedule.size(); ++i) {
      if (cfg.solver_schedule[i] < 1.0 ||
          (i > 0 && cfg.solver_schedule[i] <= cfg.solver_schedule[i - 1])) {
        errors.push_back({key_line("solver.schedule"),
                          "solver.schedule must be increasing with levels >= 1"});
        break;
      }
    }
    check(cfg.diag_grid_points >= 2, "diag.grid_points", "diag.grid_points must be >= 2");
    check(cfg.diag_t_count >= 1, "diag.t_count", "diag.t_count must be >= 1");
    check(cfg.verify_refinements >= 1, "verify.refinements", "verify.refinements must be >= 1");
    check(cfg.sweep_parameter.empty() || cfg.sweep_parameter == "eta" ||
              cfg.sweep_parameter == "alpha" || cfg.sweep_parameter == "p" ||
              cfg.sweep_parameter == "n_max",
          "sweep.parameter", "sweep.parameter must be eta, alpha, p or n_max");
    check(cfg.sweep_parameter.empty() || !cfg.sweep_values.empty(), "sweep.values",
          "sweep.values required when sweep.parameter is set");
    // deduplicate empty-message placeholders
    errors.erase(std::remove_if(errors.begin(), errors.end(),
                                [](const ConfigError& e) { return e.message.empty(); }),
                 errors.end());
  }
};

}  // namespace

ParseResult parse_config(const std::string& text) {
  Parser p;
  std::stringstream ss(text);
  std::string raw;
  while (std::getline(ss, raw)) {
    ++p.line;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw = raw.substr(0, hash);
    const std::string s = trim(raw);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      p.fail("expected 'key = value'");
      continue;
    }
    p.handle(trim(s.substr(0, eq)), trim(s.substr(eq + 1)));
  }
  p.cross_validate();
  return {std::move(p.cfg), std::move(p.errors)};
}

namespace {

void emit_samples(std::ostream& os, const std::string& key,
                  const std::vector<std::pair<double, double>>& samples) {
  if (samples.empty()) return;
  os << key << " = ";
  for (size_t i = 0; i < samples.size(); ++i) {
    if (i) os << ",";
    os << fmt17(samples[i].first) << ":" << fmt17(samples[i].second);
  }
  os << "\n";
}

void emit_field(std::ostream& os, const std::string& name, const FieldConfig& f) {
  os << name << ".family = " << f.family << "\n";
  os << name << ".value = " << fmt17(f.value) << "\n";
  os << name << ".alpha = " << fmt17(f.alpha) << "\n";
  os << name << ".a0 = " << fmt17(f.a0) << "\n";
  os << name << ".ax = " << fmt17(f.ax) << "\n";
  os << name << ".ay = " << fmt17(f.ay) << "\n";
  os << name << ".x0 = " << fmt17(f.x0) << "\n";
  os << name << ".y0 = " << fmt17(f.y0) << "\n";
  os << name << ".coord = " << f.coord << "\n";
  emit_samples(os, name + ".samples", f.samples);
}

}  // namespace

std::string serialize_config(const RunConfig& c) {
  std::ostringstream os;
  os << "mesh.domain = " << c.mesh_domain << "\n";
  os << "mesh.m = " << c.mesh_m << "\n";
  os << "mesh.refine = " << c.mesh_refine << "\n";
  os << "problem.mode = " << c.problem_mode << "\n";
  os << "problem.N = " << c.problem_N << "\n";
  os << "problem.eta = " << fmt17(c.problem_eta) << "\n";
  os << "problem.quad_order = " << c.problem_quad_order << "\n";
  os << "flux.family = " << c.flux_family << "\n";
  os << "flux.p = " << fmt17(c.flux_p) << "\n";
  os << "flux.w0 = " << fmt17(c.flux_w0) << "\n";
  os << "flux.w1 = " << fmt17(c.flux_w1) << "\n";
  os << "flux.w2 = " << fmt17(c.flux_w2) << "\n";
  emit_field(os, "f", c.f);
  emit_field(os, "lambda", c.lambda);
  emit_field(os, "g", c.g);
  os << "sigma.family = " << c.sigma_family << "\n";
  os << "sigma.q = " << fmt17(c.sigma_q) << "\n";
  os << "sigma.scale = " << fmt17(c.sigma_scale) << "\n";
  os << "sigma.increasing = " << (c.sigma_increasing ? "true" : "false") << "\n";
  emit_samples(os, "sigma.samples", c.sigma_samples);
  os << "h.family = " << c.h_family << "\n";
  os << "h.eta = " << fmt17(c.h_eta) << "\n";
  os << "h.c1 = " << fmt17(c.h_c1) << "\n";
  os << "h.s1 = " << fmt17(c.h_s1) << "\n";
  os << "h.shift = " << fmt17(c.h_shift) << "\n";
  os << "h.nonincreasing = " << (c.h_nonincreasing ? "true" : "false") << "\n";
  emit_samples(os, "h.samples", c.h_samples);
  os << "exact.a0 = " << fmt17(c.exact_a0) << "\n";
  os << "exact.ax = " << fmt17(c.exact_ax) << "\n";
  os << "exact.ay = " << fmt17(c.exact_ay) << "\n";
  os << "exact.qxx = " << fmt17(c.exact_qxx) << "\n";
  os << "exact.qxy = " << fmt17(c.exact_qxy) << "\n";
  os << "exact.qyy = " << fmt17(c.exact_qyy) << "\n";
  os << "solver.mode = " << c.solver_mode << "\n";
  os << "solver.tol_fp = " << fmt17(c.solver_tol_fp) << "\n";
  os << "solver.tol_res = " << fmt17(c.solver_tol_res) << "\n";
  os << "solver.tol_ladder = " << fmt17(c.solver_tol_ladder) << "\n";
  os << "solver.damping = " << fmt17(c.solver_damping) << "\n";
  os << "solver.lin_tol = " << fmt17(c.solver_lin_tol) << "\n";
  os << "solver.max_outer = " << c.solver_max_outer << "\n";
  os << "solver.n_max = " << fmt17(c.solver_n_max) << "\n";
  if (!c.solver_schedule.empty()) {
    os << "solver.schedule = ";
    for (size_t i = 0; i < c.solver_schedule.size(); ++i) {
      if (i) os << ",";
      os << fmt17(c.solver_schedule[i]);
    }
    os << "\n";
  }
  os << "diag.grid_points = " << c.diag_grid_points << "\n";
  os << "diag.t_count = " << c.diag_t_count << "\n";
  os << "verify.refinements = " << c.verify_refinements << "\n";
  if (!c.sweep_parameter.empty()) {
    os << "sweep.parameter = " << c.sweep_parameter << "\n";
    os << "sweep.values = ";
    for (size_t i = 0; i < c.sweep_values.size(); ++i) {
      if (i) os << ",";
      os << fmt17(c.sweep_values[i]);
    }
    os << "\n";
  }
  os << "run.seed = " << c.seed << "\n";
  return os.str();
}

std::uint64_t config_hash(const RunConfig& cfg) {
  const std::string s = serialize_config(cfg);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

MeshPtr build_mesh(const RunConfig& cfg) {
  MeshPtr mesh = cfg.mesh_domain == "disk" ? generate_unit_disk(cfg.mesh_m)
                                           : generate_unit_square(cfg.mesh_m);
  for (int i = 0; i < cfg.mesh_refine; ++i) mesh = refine_uniform(*mesh);
  return mesh;
}

SolverConfig build_solver_config(const RunConfig& cfg) {
  SolverConfig s;
  s.mode = cfg.solver_mode == "picard" ? SolverConfig::Mode::Picard : SolverConfig::Mode::Newton;
  s.tol_fp = cfg.solver_tol_fp;
  s.tol_res = cfg.solver_tol_res;
  s.tol_ladder = cfg.solver_tol_ladder;
  s.damping = cfg.solver_damping;
  s.lin_tol = cfg.solver_lin_tol;
  s.max_outer = cfg.solver_max_outer;
  s.n_max = cfg.solver_n_max;
  s.schedule = cfg.solver_schedule;
  return s;
}

namespace {

ScalarFunctionSpec build_field(const FieldConfig& fc) {
  if (fc.family == "constant") return ScalarFunctionSpec::constant(fc.value);
  if (fc.family == "affine") return ScalarFunctionSpec::affine(fc.a0, fc.ax, fc.ay);
  if (fc.family == "theta-power") {
    return ScalarFunctionSpec::theta_power(fc.value == 0.0 ? 1.0 : fc.value, fc.alpha);
  }
  if (fc.family == "disk-example") return ScalarFunctionSpec::disk_example_g(fc.alpha);
  if (fc.family == "point-power") {
    return ScalarFunctionSpec::point_power(fc.value == 0.0 ? 1.0 : fc.value, fc.alpha,
                                           {fc.x0, fc.y0});
  }
  if (fc.family == "tabulated") {
    ScalarFunctionSpec::Coordinate coord = ScalarFunctionSpec::Coordinate::X;
    if (fc.coord == "y") coord = ScalarFunctionSpec::Coordinate::Y;
    if (fc.coord == "theta") coord = ScalarFunctionSpec::Coordinate::Theta;
    return ScalarFunctionSpec::tabulated(coord, fc.samples);
  }
  throw std::invalid_argument("build_field: unsupported family " + fc.family);
}

}  // namespace

ProblemPtr build_problem(const RunConfig& cfg, MeshPtr mesh) {
  FluxSpec flux;
  flux.family = cfg.flux_family == "weighted-p-laplacian" ? FluxSpec::Family::WeightedPLaplacian
                                                          : FluxSpec::Family::PLaplacian;
  flux.p = cfg.flux_p;
  flux.w0 = cfg.flux_w0;
  flux.w1 = cfg.flux_w1;
  flux.w2 = cfg.flux_w2;

  SigmaSpec sigma;
  sigma.family = cfg.sigma_family == "tabulated" ? SigmaSpec::Family::Tabulated
                                                 : SigmaSpec::Family::Power;
  sigma.exponent = cfg.sigma_q;
  sigma.scale = cfg.sigma_scale;
  sigma.samples = cfg.sigma_samples;
  sigma.increasing = cfg.sigma_increasing;

  HSpec h;
  if (cfg.h_family == "bounded") h.family = HSpec::Family::Bounded;
  else if (cfg.h_family == "rational") h.family = HSpec::Family::Rational;
  else if (cfg.h_family == "tabulated") h.family = HSpec::Family::Tabulated;
  else h.family = HSpec::Family::PowerSingular;
  h.eta = cfg.effective_h_eta();
  h.c1 = cfg.h_c1;
  h.s1 = cfg.h_s1;
  h.shift = cfg.h_shift;
  h.samples = cfg.h_samples;
  h.nonincreasing = cfg.h_nonincreasing;

  const RegularizationMode mode = cfg.problem_mode == "model" ? RegularizationMode::Model
                                                              : RegularizationMode::General;

  if (cfg.f.family == "manufactured" || cfg.g.family == "manufactured") {
    AnalyticField u;
    u.c = cfg.exact_a0;
    u.ax = cfg.exact_ax;
    u.ay = cfg.exact_ay;
    u.qxx = cfg.exact_qxx;
    u.qxy = cfg.exact_qxy;
    u.qyy = cfg.exact_qyy;
    return manufacture(u, build_field(cfg.lambda), sigma, h, flux, mesh, cfg.problem_eta,
                       mode, cfg.problem_quad_order);
  }

  auto spec = std::make_shared<ProblemSpec>();
  spec->mesh = mesh;
  spec->flux = flux;
  spec->f = build_field(cfg.f);
  spec->lambda = build_field(cfg.lambda);
  spec->g = build_field(cfg.g);
  spec->sigma = sigma;
  spec->h = h;
  spec->dimN = cfg.problem_N;
  spec->eta = cfg.problem_eta;
  spec->mode = mode;
  spec->boundary_quad_order = cfg.problem_quad_order;
  return spec;
}

}  // namespace robinfem
