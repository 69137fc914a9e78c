#include "robinfem/flux.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "robinfem/functions.hpp"
#include "robinfem/mesh.hpp"

namespace robinfem {

Vec2 FluxSpec::a(const Vec2& x, const Vec2& xi) const {
  const double g2 = xi.norm2();
  if (g2 == 0.0) return {0.0, 0.0};  // |xi|^{p-2} xi -> 0 for p > 1
  const double mag = weight(x) * std::pow(g2, 0.5 * (p - 2.0));
  return xi * mag;
}

Mat2 FluxSpec::tangent(const Vec2& x, const Vec2& xi, double eps_reg) const {
  const double g2 = xi.norm2() + eps_reg;
  const double w = weight(x);
  const double mag = w * std::pow(g2, 0.5 * (p - 2.0));
  const double cross = w * (p - 2.0) * std::pow(g2, 0.5 * (p - 2.0) - 1.0);
  return {mag + cross * xi.x * xi.x, cross * xi.x * xi.y,
          cross * xi.y * xi.x, mag + cross * xi.y * xi.y};
}

double FluxSpec::divergence(const Vec2& x, const AnalyticField& u) const {
  const Vec2 g = u.gradient(x);
  const auto [hxx, hxy, hyy] = u.hessian();
  const double g2 = g.norm2();
  const double w = weight(x);
  const Vec2 gw = weight_gradient();
  if (u.is_affine()) {
    // grad u constant: div a = grad w . xi |xi|^{p-2}
    if (g2 == 0.0) return 0.0;
    return gw.dot(g) * std::pow(g2, 0.5 * (p - 2.0));
  }
  if (g2 == 0.0) {
    if (p > 2.0) return 0.0;
    if (p == 2.0) return w * (hxx + hyy);
    // p < 2 degenerates at critical points of u; callers must avoid them.
    return std::numeric_limits<double>::quiet_NaN();
  }
  const double lap = hxx + hyy;
  const double gHg = g.x * (hxx * g.x + hxy * g.y) + g.y * (hxy * g.x + hyy * g.y);
  const double m = std::pow(g2, 0.5 * (p - 2.0));
  return w * (m * lap + (p - 2.0) * std::pow(g2, 0.5 * (p - 2.0) - 1.0) * gHg) +
         m * gw.dot(g);
}

namespace {

std::pair<double, double> weight_range(const FluxSpec& f, const Mesh2D& mesh) {
  if (f.family == FluxSpec::Family::PLaplacian) return {1.0, 1.0};
  double lo = kInfinity, hi = -kInfinity;
  for (const auto& v : mesh.vertices()) {
    const double w = f.weight(v);
    lo = std::min(lo, w);
    hi = std::max(hi, w);
  }
  return {lo, hi};
}

}  // namespace

double FluxSpec::coercivity(const Mesh2D& mesh) const {
  return std::min(1.0, weight_range(*this, mesh).first);
}

double FluxSpec::growth(const Mesh2D& mesh) const {
  return std::max(1.0, weight_range(*this, mesh).second);
}

std::vector<std::string> FluxSpec::validate(const Mesh2D& mesh, std::uint64_t seed) const {
  std::vector<std::string> issues;
  if (!(p > 1.0)) issues.push_back("flux: p must be > 1");
  const auto [wmin, wmax] = weight_range(*this, mesh);
  if (wmin <= 0.0) {
    std::ostringstream os;
    os << "flux: weight reaches " << wmin << " on the mesh (must stay positive)";
    issues.push_back(os.str());
    return issues;
  }
  const double alpha = std::min(1.0, wmin);
  const double beta = std::max(1.0, wmax);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> comp(-3.0, 3.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto& vs = mesh.vertices();
  for (int trial = 0; trial < 200; ++trial) {
    const Vec2 x = vs[static_cast<size_t>(unit(rng) * (vs.size() - 1))];
    const Vec2 xi{comp(rng), comp(rng)};
    const Vec2 eta{comp(rng), comp(rng)};
    if ((xi - eta).norm() < 1e-9) continue;
    const Vec2 axi = a(x, xi), aeta = a(x, eta);
    if ((axi - aeta).dot(xi - eta) <= 0.0) {
      issues.push_back("flux: strict monotonicity violated on a random sample");
      break;
    }
    if (axi.dot(xi) < alpha * std::pow(xi.norm(), p) * (1.0 - 1e-12)) {
      issues.push_back("flux: coercivity a(x,xi).xi >= alpha|xi|^p violated");
      break;
    }
    if (axi.norm() > beta * std::pow(xi.norm(), p - 1.0) * (1.0 + 1e-12)) {
      issues.push_back("flux: growth |a(x,xi)| <= beta|xi|^{p-1} violated");
      break;
    }
  }
  return issues;
}

}  // namespace robinfem
