#include "robinfem/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "robinfem/assembly.hpp"

namespace robinfem {

namespace {

const char* status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "PASS";
    case CheckStatus::Fail: return "FAIL";
    case CheckStatus::Refused: return "REFUSED";
    case CheckStatus::Info: return "INFO";
  }
  return "?";
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

bool EstimateReport::all_pass() const {
  for (const auto& c : checks) {
    if (c.status == CheckStatus::Fail) return false;
  }
  return true;
}

void EstimateReport::write_csv(std::ostream& os,
                               const std::vector<std::string>& header_lines) const {
  for (const auto& h : header_lines) os << "# " << h << "\n";
  os << "report,context,check,measured,bound,tolerance,status,detail\n";
  for (const auto& c : checks) {
    os << title << "," << context << "," << c.name << "," << fmt17(c.measured) << ","
       << fmt17(c.bound) << "," << fmt17(c.tolerance) << "," << status_name(c.status) << ","
       << c.detail << "\n";
  }
}

void EstimateReport::write_summary(std::ostream& os) const {
  os << "== " << title << " [" << context << "]\n";
  for (const auto& c : checks) {
    os << "  " << status_name(c.status) << "  " << c.name << ": measured=" << fmt17(c.measured);
    if (c.status == CheckStatus::Pass || c.status == CheckStatus::Fail) {
      os << " bound=" << fmt17(c.bound) << " tol=" << fmt17(c.tolerance);
    }
    if (!c.detail.empty()) os << "  (" << c.detail << ")";
    os << "\n";
  }
}

std::vector<double> log_spaced(double lo, double hi, int count) {
  std::vector<double> g;
  if (!(lo > 0.0) || !(hi >= lo) || count < 1) return g;
  if (count == 1 || hi == lo) {
    g.push_back(lo);
    return g;
  }
  const double llo = std::log(lo), lhi = std::log(hi);
  g.reserve(count);
  for (int i = 0; i < count; ++i) {
    g.push_back(std::exp(llo + (lhi - llo) * i / (count - 1)));
  }
  return g;
}

bool within_factor(const std::vector<double>& values, double factor) {
  double lo = kInfinity, hi = 0.0;
  for (double v : values) {
    if (v <= 0.0) return false;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return values.size() < 2 || hi <= factor * lo;
}

EntropyResidual entropy_residual(const DiscreteField& u, const DiscreteField& v, double k,
                                 const ProblemSpec& spec) {
  if (!(k > 0.0)) throw std::invalid_argument("entropy_residual: k must be positive");
  const Mesh2D& mesh = *spec.mesh;
  const RegularizedProblem untruncated = regularize(std::make_shared<ProblemSpec>(spec), kInfinity);
  EntropyResidual out;

  // Gate: the singular source must be integrable where g lives ({u=0}<={g=0}).
  if (spec.h.singular_at_zero() ||
      (spec.mode == RegularizationMode::Model && spec.eta > 0.0)) {
    Assembler weights(untruncated);
    double gmax = 0.0;
    for (double gb : weights.g_bar()) gmax = std::max(gmax, gb);
    for (int i = 0; i < u.size(); ++i) {
      if (u[i] <= 1e-14 && weights.g_bar()[i] > 1e-12 * std::max(1.0, gmax)) {
        ++out.flagged_nodes;
      }
    }
    if (out.flagged_nodes > 0 && !spec.sign_changing) {
      out.applicable = false;
      out.residual = kInfinity;
      return out;
    }
  }

  // w = T_k(u - v) nodally.
  DiscreteField w(u.mesh(), 0.0);
  for (int i = 0; i < u.size(); ++i) w[i] = truncate(u[i] - v[i], k);

  double lhs = 0.0, rhs = 0.0;
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tri = mesh.triangles()[t];
    const auto grads = mesh.shape_gradients(t);
    Vec2 grad_u{0.0, 0.0}, grad_w{0.0, 0.0};
    for (int kk = 0; kk < 3; ++kk) {
      grad_u = grad_u + grads[kk] * u[tri[kk]];
      grad_w = grad_w + grads[kk] * w[tri[kk]];
    }
    const double wq = mesh.triangle_area(t) / 3.0;
    for (int kk = 0; kk < 3; ++kk) {
      const Vec2 mid = (mesh.vertices()[tri[kk]] + mesh.vertices()[tri[(kk + 1) % 3]]) * 0.5;
      lhs += wq * spec.flux.a(mid, grad_u).dot(grad_w);
      const double wmid = 0.5 * (w[tri[kk]] + w[tri[(kk + 1) % 3]]);
      if (!spec.f.boundary_only()) rhs += wq * spec.f.value(mid) * wmid;
    }
  }

  const int order = spec.boundary_quad_order;
  for (const auto& e : mesh.boundary_edges()) {
    const Vec2 a = mesh.vertices()[e.a], b = mesh.vertices()[e.b];
    for (const auto& qp : boundary_quadrature(e, mesh, order)) {
      const BoundaryPoint bp = make_boundary_point(qp.point, e.normal);
      const double t = (qp.point - a).dot(b - a) / (b - a).norm2();
      const double uq = (1.0 - t) * u[e.a] + t * u[e.b];
      const double wq = (1.0 - t) * w[e.a] + t * w[e.b];
      lhs += qp.weight * spec.lambda.value(bp) * untruncated.sigma_n(uq) * wq;
      const double gv = spec.g.value(bp);
      if (gv != 0.0) {
        double factor = untruncated.source_factor(std::abs(uq));
        if (spec.sign_changing && uq < 0.0) factor = -factor;
        rhs += qp.weight * gv * factor * wq;
      }
    }
  }

  out.lhs = lhs;
  out.rhs = rhs;
  out.residual = std::abs(lhs - rhs);
  return out;
}

namespace {

// ||T_k(u)||^p_{W^{1,p}} with nodal truncation.
double truncation_energy(const DiscreteField& u, const ProblemSpec& spec, double k) {
  const Mesh2D& mesh = *spec.mesh;
  const double p = spec.flux.p;
  double e = 0.0;
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tri = mesh.triangles()[t];
    const auto grads = mesh.shape_gradients(t);
    Vec2 g{0.0, 0.0};
    std::array<double, 3> wv{};
    for (int kk = 0; kk < 3; ++kk) {
      wv[kk] = truncate(u[tri[kk]], k);
      g = g + grads[kk] * wv[kk];
    }
    e += mesh.triangle_area(t) * std::pow(g.norm(), p);
    const double wq = mesh.triangle_area(t) / 3.0;
    for (int kk = 0; kk < 3; ++kk) {
      e += wq * std::pow(std::abs(0.5 * (wv[kk] + wv[(kk + 1) % 3])), p);
    }
  }
  return e;
}

}  // namespace

double truncation_energy_constant(const DiscreteField& u, const ProblemSpec& spec,
                                  const std::vector<double>& k_grid) {
  double c = 0.0;
  for (double k : k_grid) c = std::max(c, truncation_energy(u, spec, k) / k);
  return c;
}

EstimateReport truncation_energy_check(const DiscreteField& u, const ProblemSpec& spec,
                                       const std::vector<double>& k_grid) {
  EstimateReport rep;
  rep.title = "truncation_energy";
  double c = 0.0;
  for (double k : k_grid) {
    const double e = truncation_energy(u, spec, k);
    c = std::max(c, e / k);
    CheckResult r;
    r.name = "E(k)/k at k=" + fmt17(k);
    r.measured = e / k;
    r.status = CheckStatus::Info;
    rep.add(std::move(r));
  }
  CheckResult fit;
  fit.name = "fitted C = max_k E(k)/k";
  fit.measured = c;
  fit.status = CheckStatus::Info;
  rep.add(std::move(fit));
  return rep;
}

EstimateReport truncation_energy_stability(const std::vector<std::pair<std::string, double>>& cs,
                                           double factor) {
  EstimateReport rep;
  rep.title = "truncation_energy_stability";
  std::vector<double> values;
  for (const auto& [label, c] : cs) {
    values.push_back(c);
    CheckResult r;
    r.name = "C @ " + label;
    r.measured = c;
    r.status = CheckStatus::Info;
    rep.add(std::move(r));
  }
  CheckResult overall;
  overall.name = "C within factor " + fmt17(factor) + " across runs";
  overall.measured = values.empty() ? 0.0
                                    : *std::max_element(values.begin(), values.end()) /
                                          *std::min_element(values.begin(), values.end());
  overall.bound = factor;
  overall.status = within_factor(values, factor) ? CheckStatus::Pass : CheckStatus::Fail;
  rep.add(std::move(overall));
  return rep;
}

EstimateReport absorption_estimate_check(const DiscreteField& u, const RegularizedProblem& rp,
                                         const std::vector<double>& t_grid, double rel_slack) {
  Assembler asmb(rp);
  // superlevel sets realized at vertices; each vertex carries its assembled
  // absorption/load/source contribution (matches the residual's scheme, so
  // the t -> 0 limit reproduces the discrete mass balance)
  const auto [absorb, source] = asmb.boundary_contributions(u);
  EstimateReport rep;
  rep.title = "absorption_estimate";
  rep.context = "level n=" + fmt17(rp.level());
  for (double t : t_grid) {
    double lhs = 0.0, rhs = 0.0;
    for (int i = 0; i < u.size(); ++i) {
      if (u[i] > t) {
        lhs += absorb[i];
        rhs += asmb.load()[i] + source[i];
      }
    }
    const double slack = rel_slack * std::max({1.0, std::abs(lhs), std::abs(rhs)});
    CheckResult r;
    r.name = "superlevel t=" + fmt17(t);
    r.measured = lhs;
    r.bound = rhs;
    r.tolerance = slack;
    r.status = lhs <= rhs + slack ? CheckStatus::Pass : CheckStatus::Fail;
    rep.add(std::move(r));
  }
  return rep;
}

QuasiNormSample marcinkiewicz_quasinorm(const std::vector<double>& values,
                                        const std::vector<double>& measures, double r,
                                        int grid_points) {
  if (values.size() != measures.size()) {
    throw std::invalid_argument("marcinkiewicz_quasinorm: values/measures size mismatch");
  }
  if (!(r > 0.0)) throw std::invalid_argument("marcinkiewicz_quasinorm: r must be positive");
  QuasiNormSample out;
  out.r = r;
  double lo = kInfinity, hi = 0.0;
  for (double v : values) {
    const double a = std::abs(v);
    if (a > 0.0) lo = std::min(lo, a);
    hi = std::max(hi, a);
  }
  if (hi == 0.0) return out;  // all-zero field
  out.thresholds = log_spaced(lo, hi, grid_points);
  for (double t : out.thresholds) {
    double mu = 0.0;
    for (size_t i = 0; i < values.size(); ++i) {
      if (std::abs(values[i]) >= t) mu += measures[i];
    }
    const double s = t * std::pow(mu, 1.0 / r);
    out.samples.push_back(s);
    out.sup = std::max(out.sup, s);
  }
  return out;
}

EstimateReport uniqueness_crosscheck(ProblemPtr spec, const SolverConfig& config) {
  EstimateReport rep;
  rep.title = "uniqueness_crosscheck";
  if (!spec->sigma.increasing || !spec->h.nonincreasing) {
    CheckResult r;
    r.name = "hypotheses (sigma increasing, h nonincreasing)";
    r.status = CheckStatus::Refused;
    r.detail = "monotonicity flags absent; uniqueness theorem does not apply";
    rep.add(std::move(r));
    return rep;
  }
  const double n_final = config.effective_schedule().back();
  const RegularizedProblem rp = regularize(spec, n_final);
  rep.context = "level n=" + fmt17(n_final);

  auto [u_low, rep_low] = solve_level(rp, config, DiscreteField(spec->mesh, 0.0));
  const double scale = 10.0 * std::max(1.0, u_low.max_abs());
  auto [u_high, rep_high] = solve_level(rp, config, DiscreteField(spec->mesh, scale));

  const double diff = u_low.max_abs_diff(u_high);
  const double tol = std::max(1e-8, 1e3 * config.tol_res);
  CheckResult r;
  r.name = "cold starts u0=0 vs u0=" + fmt17(scale);
  r.measured = diff;
  r.bound = tol;
  r.tolerance = tol;
  r.status = diff <= tol ? CheckStatus::Pass : CheckStatus::Fail;
  rep.add(std::move(r));
  return rep;
}

BoundaryBalance boundary_l1_balance(const DiscreteField& u, const RegularizedProblem& rp) {
  Assembler asmb(rp);
  BoundaryBalance b;
  b.absorption = asmb.absorption_integral(u);
  b.load = asmb.load_integral();
  b.source = asmb.source_integral(u);
  b.defect = b.absorption - b.load - b.source;
  return b;
}

double scaled_weak_residual(const ProblemSpec& spec, const DiscreteField& u) {
  const RegularizedProblem rp = regularize(std::make_shared<ProblemSpec>(spec), kInfinity);
  Assembler asmb(rp, BoundaryScheme::EdgeQuadrature);
  const Eigen::VectorXd r = asmb.residual(u);
  const Mesh2D& mesh = *spec.mesh;
  double worst = 0.0;
  for (int i = 0; i < u.size(); ++i) {
    const double s = mesh.lumped_interior_measure()[i] + mesh.lumped_boundary_measure()[i];
    worst = std::max(worst, std::abs(r[i]) / s);
  }
  return worst;
}

}  // namespace robinfem
