#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "robinfem/flux.hpp"
#include "robinfem/functions.hpp"
#include "robinfem/mesh.hpp"
#include "robinfem/scalar_spec.hpp"

namespace robinfem {

// How a level-n problem is built from the instance data.
//   Model:   -Lap u = T_n(f), du/dnu + lambda u = T_n(g)/(|u| + 1/n)^eta
//            (lambda and the absorption kept untruncated; requires p = 2,
//             sigma(s) = s, h(s) = s^{-eta})
//   General: all of f, lambda, g, sigma, h truncated at level n and the
//            source is h_n(u) g_n.
enum class RegularizationMode { Model, General };

struct ProblemSpec {
  MeshPtr mesh;
  FluxSpec flux;
  ScalarFunctionSpec f = ScalarFunctionSpec::constant(0.0);
  ScalarFunctionSpec lambda = ScalarFunctionSpec::constant(1.0);
  ScalarFunctionSpec g = ScalarFunctionSpec::constant(0.0);
  SigmaSpec sigma;
  HSpec h;
  int dimN = 3;       // dimension parameter for the exponent formulas (the paper has N > 2)
  double eta = 1.0;
  RegularizationMode mode = RegularizationMode::General;
  bool sign_changing = false;  // residual-evaluation only; never solver input
  int boundary_quad_order = 4;

  // Nonnegativity of f, lambda, g at all quadrature points, int lambda > 0,
  // structure of sigma/h/flux, and mode consistency. Returns all violations.
  std::vector<std::string> validate(std::uint64_t seed = 0) const;
};

using ProblemPtr = std::shared_ptr<const ProblemSpec>;

// Level-n view of a problem. n = +inf gives the untruncated data (used by
// the diagnostics on limit objects).
class RegularizedProblem {
 public:
  RegularizedProblem(ProblemPtr spec, double n);

  const ProblemSpec& spec() const { return *spec_; }
  const ProblemPtr& spec_ptr() const { return spec_; }
  double level() const { return n_; }
  const Mesh2D& mesh() const { return *spec_->mesh; }

  double f_n(const Vec2& x) const;
  double lambda_n(const BoundaryPoint& bp) const;
  double g_n(const BoundaryPoint& bp) const;

  double sigma_n(double s) const;
  double dsigma_n(double s) const;

  // Source factor S(s) with source = g_n * S(u): h_n(u) in general mode,
  // (|u| + 1/n)^{-eta} in model mode.
  double source_factor(double s) const;
  double dsource_factor(double s) const;

  RegularizedProblem at_level(double n) const { return {spec_, n}; }

 private:
  ProblemPtr spec_;
  double n_;
};

RegularizedProblem regularize(ProblemPtr spec, double n);

// Method of manufactured solutions: for exact u (positive on the boundary)
// builds f = -div a(x, grad u) and g = (a(x,grad u).nu + lambda sigma(u))/h(u).
// Throws if the derived g is negative beyond -1e-12 at any boundary
// quadrature point.
ProblemPtr manufacture(const AnalyticField& u_exact, ScalarFunctionSpec lambda,
                       SigmaSpec sigma, HSpec h, FluxSpec flux, MeshPtr mesh,
                       double eta, RegularizationMode mode = RegularizationMode::General,
                       int boundary_quad_order = 4);

// The harmonic example on the unit disk: u = r sin(theta), lambda = |theta|^{-alpha},
// g = sin^2(theta)(1 + |theta|^{-alpha}), eta = 1, p = 2. Sign-changing, so the
// returned spec is quarantined to residual evaluation. Also returns the nodal
// interpolation of u. alpha must lie in [0, 1) (else lambda is not integrable).
std::pair<ProblemPtr, DiscreteField> exact_disk_example(double alpha, MeshPtr disk_mesh,
                                                        int boundary_quad_order = 4);

// The linear barrier problem: -Lap v = T_1(f), dv/dnu + ||lambda||_inf v = 0.
// ||lambda||_inf is the max over boundary quadrature points; throws
// std::invalid_argument for singular lambda families (barrier inapplicable).
ProblemPtr subsolution_problem(const ProblemSpec& spec);

}  // namespace robinfem
