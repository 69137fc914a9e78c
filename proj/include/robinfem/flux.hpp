#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "robinfem/geometry.hpp"

namespace robinfem {

class Mesh2D;

// Polynomial field u(x,y) = c + ax x + ay y + qxx x^2 + qxy xy + qyy y^2 with
// closed-form gradient and (constant) Hessian. Covers the manufactured
// solutions used here; note r sin(theta) is just the coordinate y.
struct AnalyticField {
  double c = 0.0, ax = 0.0, ay = 0.0;
  double qxx = 0.0, qxy = 0.0, qyy = 0.0;

  double value(const Vec2& p) const {
    return c + ax * p.x + ay * p.y + qxx * p.x * p.x + qxy * p.x * p.y + qyy * p.y * p.y;
  }
  Vec2 gradient(const Vec2& p) const {
    return {ax + 2.0 * qxx * p.x + qxy * p.y, ay + qxy * p.x + 2.0 * qyy * p.y};
  }
  // Hessian entries (hxx, hxy, hyy); constant for this family.
  std::array<double, 3> hessian() const { return {2.0 * qxx, qxy, 2.0 * qyy}; }
  bool is_affine() const { return qxx == 0.0 && qxy == 0.0 && qyy == 0.0; }
};

struct Mat2 {
  double a11 = 0.0, a12 = 0.0, a21 = 0.0, a22 = 0.0;
  Vec2 apply(const Vec2& v) const { return {a11 * v.x + a12 * v.y, a21 * v.x + a22 * v.y}; }
};

// Flux a(x, xi) of p-Laplacian type. The weighted family multiplies by the
// affine weight w(x,y) = w0 + w1 x + w2 y (positive on the mesh's hull).
struct FluxSpec {
  enum class Family { PLaplacian, WeightedPLaplacian };

  Family family = Family::PLaplacian;
  double p = 2.0;
  double w0 = 1.0, w1 = 0.0, w2 = 0.0;

  double weight(const Vec2& x) const {
    return family == Family::PLaplacian ? 1.0 : w0 + w1 * x.x + w2 * x.y;
  }
  Vec2 weight_gradient() const {
    return family == Family::PLaplacian ? Vec2{0.0, 0.0} : Vec2{w1, w2};
  }

  Vec2 a(const Vec2& x, const Vec2& xi) const;

  // Derivative of a in xi with the degeneracy floor |xi|^2 + eps_reg applied
  // to the tangent only.
  Mat2 tangent(const Vec2& x, const Vec2& xi, double eps_reg) const;

  // div a(x, grad u(x)) in closed form for AnalyticField u.
  double divergence(const Vec2& x, const AnalyticField& u) const;

  // Coercivity/growth constants declared by the built-in families over the
  // weight range [wmin, wmax] on the mesh.
  double coercivity(const Mesh2D& mesh) const;
  double growth(const Mesh2D& mesh) const;

  // Samples (a(xi)-a(xi'))·(xi-xi') > 0, coercivity and growth on seeded
  // random draws; returns violation messages.
  std::vector<std::string> validate(const Mesh2D& mesh, std::uint64_t seed) const;
};

}  // namespace robinfem
