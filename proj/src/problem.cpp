#include "robinfem/problem.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace robinfem {

namespace {

// Applies fn at every boundary quadrature point of the mesh.
template <typename Fn>
void for_each_boundary_qp(const Mesh2D& mesh, int order, Fn&& fn) {
  for (const auto& e : mesh.boundary_edges()) {
    for (const auto& qp : boundary_quadrature(e, mesh, order)) {
      fn(make_boundary_point(qp.point, e.normal), qp.weight);
    }
  }
}

}  // namespace

std::vector<std::string> ProblemSpec::validate(std::uint64_t seed) const {
  std::vector<std::string> issues;
  if (!mesh) {
    issues.push_back("problem: no mesh");
    return issues;
  }
  if (eta < 0.0) issues.push_back("problem: eta must be >= 0");
  if (dimN < 2) issues.push_back("problem: N must be >= 2");

  for (auto msg : flux.validate(*mesh, seed)) issues.push_back(msg);
  for (auto msg : sigma.validate(flux.p)) issues.push_back(msg);
  for (auto msg : h.validate()) issues.push_back(msg);

  if (mode == RegularizationMode::Model) {
    if (flux.family != FluxSpec::Family::PLaplacian || flux.p != 2.0) {
      issues.push_back("problem: model mode requires the plain p = 2 Laplacian");
    }
    if (sigma.family != SigmaSpec::Family::Power || sigma.exponent != 1.0 ||
        sigma.scale != 1.0) {
      issues.push_back("problem: model mode requires sigma(s) = s");
    }
    if (h.family != HSpec::Family::PowerSingular || h.c1 != 1.0 || h.eta != eta) {
      issues.push_back("problem: model mode requires h(s) = s^{-eta}");
    }
  }

  // Interior load sign at triangle quadrature points (edge midpoints).
  if (!f.boundary_only()) {
    bool f_ok = true;
    for (int t = 0; t < mesh->triangle_count() && f_ok; ++t) {
      const auto& tri = mesh->triangles()[t];
      for (int k = 0; k < 3 && f_ok; ++k) {
        const Vec2 midp = (mesh->vertices()[tri[k]] + mesh->vertices()[tri[(k + 1) % 3]]) * 0.5;
        if (f.value(midp) < -1e-12) f_ok = false;
      }
    }
    if (!f_ok && !sign_changing) issues.push_back("problem: f negative at a quadrature point");
  }

  double lambda_mass = 0.0;
  bool lg_ok = true;
  for_each_boundary_qp(*mesh, boundary_quad_order, [&](const BoundaryPoint& bp, double w) {
    const double lv = lambda.value(bp);
    lambda_mass += w * lv;
    if (lv < -1e-12 || g.value(bp) < -1e-12) lg_ok = false;
  });
  if (!lg_ok) issues.push_back("problem: lambda or g negative at a boundary quadrature point");
  if (!(lambda_mass > 0.0)) issues.push_back("problem: int lambda dH must be positive");
  return issues;
}

RegularizedProblem::RegularizedProblem(ProblemPtr spec, double n) : spec_(std::move(spec)), n_(n) {
  if (!(n_ >= 1.0)) throw std::invalid_argument("RegularizedProblem: level must be >= 1");
}

double RegularizedProblem::f_n(const Vec2& x) const {
  return truncate(spec_->f.value(x), n_);
}

double RegularizedProblem::lambda_n(const BoundaryPoint& bp) const {
  const double v = spec_->lambda.value(bp);
  // Model scheme keeps lambda untruncated (it is bounded there by assumption).
  return spec_->mode == RegularizationMode::Model ? v : truncate(v, n_);
}

double RegularizedProblem::g_n(const BoundaryPoint& bp) const {
  return truncate(spec_->g.value(bp), n_);
}

// General mode evaluates sigma_n/h_n at |s| like the fixed-point scheme does
// (sigma odd-extended, the source factor even), so transient negative Newton
// iterates stay well-defined; solutions live in s >= 0 where this is sigma/h.
double RegularizedProblem::sigma_n(double s) const {
  if (spec_->mode == RegularizationMode::Model) return s;
  const double v = spec_->sigma.truncated(std::abs(s), n_);
  return s < 0.0 ? -v : v;
}

double RegularizedProblem::dsigma_n(double s) const {
  if (spec_->mode == RegularizationMode::Model) return 1.0;
  return spec_->sigma.truncated_derivative(std::abs(s), n_);
}

double RegularizedProblem::source_factor(double s) const {
  if (spec_->mode == RegularizationMode::Model) {
    const double base = std::abs(s) + 1.0 / n_;  // 1/inf = 0: untruncated limit
    return std::pow(base, -spec_->eta);
  }
  return spec_->h.truncated(std::abs(s), n_);
}

double RegularizedProblem::dsource_factor(double s) const {
  const double sgn = s < 0.0 ? -1.0 : 1.0;
  if (spec_->mode == RegularizationMode::Model) {
    const double eta = spec_->eta;
    if (eta == 0.0) return 0.0;
    const double base = std::abs(s) + 1.0 / n_;
    return -eta * std::pow(base, -eta - 1.0) * sgn;
  }
  return sgn * spec_->h.truncated_derivative(std::abs(s), n_);
}

RegularizedProblem regularize(ProblemPtr spec, double n) {
  return RegularizedProblem(std::move(spec), n);
}

ProblemPtr manufacture(const AnalyticField& u_exact, ScalarFunctionSpec lambda,
                       SigmaSpec sigma, HSpec h, FluxSpec flux, MeshPtr mesh,
                       double eta, RegularizationMode mode, int boundary_quad_order) {
  auto spec = std::make_shared<ProblemSpec>();
  spec->mesh = mesh;
  spec->flux = flux;
  spec->f = ScalarFunctionSpec::manufactured_load(flux, u_exact);
  spec->lambda = lambda;
  spec->g = ScalarFunctionSpec::manufactured_source(flux, u_exact, lambda, sigma, h);
  spec->sigma = sigma;
  spec->h = h;
  spec->eta = eta;
  spec->mode = mode;
  spec->boundary_quad_order = boundary_quad_order;

  for_each_boundary_qp(*mesh, boundary_quad_order, [&](const BoundaryPoint& bp, double) {
    const double u = u_exact.value(bp.x);
    if (!(u > 0.0)) {
      throw std::invalid_argument("manufacture: exact solution must be positive on the boundary");
    }
    const double gv = spec->g.value(bp);
    if (gv < -1e-12) {
      std::ostringstream os;
      os << "manufacture: derived g = " << gv << " < 0 at (" << bp.x.x << ", " << bp.x.y << ")";
      throw std::invalid_argument(os.str());
    }
  });
  return spec;
}

std::pair<ProblemPtr, DiscreteField> exact_disk_example(double alpha, MeshPtr disk_mesh,
                                                        int boundary_quad_order) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("exact_disk_example: alpha must lie in [0,1) for integrable lambda");
  }
  if (disk_mesh->domain() != Mesh2D::Domain::Disk) {
    throw std::invalid_argument("exact_disk_example: needs a disk mesh");
  }
  auto spec = std::make_shared<ProblemSpec>();
  spec->mesh = disk_mesh;
  spec->flux = FluxSpec{};  // p = 2 Laplacian
  spec->f = ScalarFunctionSpec::constant(0.0);
  spec->lambda = alpha == 0.0 ? ScalarFunctionSpec::constant(1.0)
                              : ScalarFunctionSpec::theta_power(1.0, alpha);
  spec->g = ScalarFunctionSpec::disk_example_g(alpha);
  spec->sigma = SigmaSpec{};                       // sigma(s) = s
  spec->h = HSpec{HSpec::Family::PowerSingular, 1.0, 1.0};  // h(s) = 1/s
  spec->eta = 1.0;
  spec->mode = RegularizationMode::Model;
  spec->sign_changing = true;
  spec->boundary_quad_order = boundary_quad_order;

  std::vector<double> vals(disk_mesh->vertex_count());
  for (int i = 0; i < disk_mesh->vertex_count(); ++i) {
    vals[i] = disk_mesh->vertices()[i].y;  // r sin(theta)
  }
  return {spec, DiscreteField(disk_mesh, std::move(vals))};
}

ProblemPtr subsolution_problem(const ProblemSpec& spec) {
  if (spec.lambda.has_singular_point()) {
    throw std::invalid_argument("subsolution_problem: lambda unbounded, barrier inapplicable");
  }
  double lambda_sup = 0.0;
  for_each_boundary_qp(*spec.mesh, spec.boundary_quad_order,
                       [&](const BoundaryPoint& bp, double) {
                         lambda_sup = std::max(lambda_sup, spec.lambda.value(bp));
                       });
  if (!(lambda_sup > 0.0)) {
    throw std::invalid_argument("subsolution_problem: lambda vanishes at all quadrature points");
  }

  auto barrier = std::make_shared<ProblemSpec>();
  barrier->mesh = spec.mesh;
  barrier->flux = FluxSpec{};  // the barrier problem is the linear Laplacian
  barrier->f = spec.f.boundary_only() ? ScalarFunctionSpec::constant(0.0) : spec.f;
  barrier->lambda = ScalarFunctionSpec::constant(lambda_sup);
  barrier->g = ScalarFunctionSpec::constant(0.0);
  barrier->sigma = SigmaSpec{};
  barrier->h = HSpec{HSpec::Family::PowerSingular, 0.0, 1.0};  // h == 1
  barrier->eta = 0.0;
  barrier->mode = RegularizationMode::Model;
  barrier->boundary_quad_order = spec.boundary_quad_order;
  return barrier;
}

}  // namespace robinfem
