#include "robinfem/assembly.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace robinfem {

Eigen::SparseMatrix<double> SparseOperator::to_eigen() const {
  Eigen::SparseMatrix<double> m(dim, dim);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

bool SparseOperator::is_symmetric(double tol) const {
  const Eigen::SparseMatrix<double> m = to_eigen();
  const Eigen::SparseMatrix<double> d = Eigen::SparseMatrix<double>(m.transpose()) - m;
  for (int k = 0; k < d.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(d, k); it; ++it) {
      if (std::abs(it.value()) > tol) return false;
    }
  }
  return true;
}

void SparseOperator::dump(std::ostream& os) const {
  const Eigen::SparseMatrix<double> m = to_eigen();
  for (int k = 0; k < m.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(m, k); it; ++it) {
      os << it.row() << " " << it.col() << " " << it.value() << "\n";
    }
  }
}

namespace {

// u is interpolated along the edge by the segment parameter of the
// quadrature point; hats on the edge are (1-t, t).
double edge_parameter(const Mesh2D& mesh, const BoundaryEdge& e, const Vec2& x) {
  const Vec2 a = mesh.vertices()[e.a], b = mesh.vertices()[e.b];
  return (x - a).dot(b - a) / (b - a).norm2();
}

// Odd extension of the source factor for sign-changing residual studies:
// the disk example's boundary relation reads g/u, not g/|u|.
double signed_source_factor(const RegularizedProblem& rp, double s) {
  if (rp.spec().sign_changing && s < 0.0) return -rp.source_factor(-s);
  return rp.source_factor(s);
}

}  // namespace

Assembler::Assembler(const RegularizedProblem& rp, BoundaryScheme scheme)
    : rp_(rp), scheme_(scheme) {
  const Mesh2D& mesh = rp_.mesh();
  const int nv = mesh.vertex_count();
  load_.setZero(nv);
  lambda_bar_.assign(nv, 0.0);
  g_bar_.assign(nv, 0.0);

  // Load: 3-midpoint rule (exact for quadratics), phi_i = 1/2 on the two
  // adjacent midpoints.
  if (!rp_.spec().f.boundary_only()) {
    for (int t = 0; t < mesh.triangle_count(); ++t) {
      const auto& tri = mesh.triangles()[t];
      const double w = mesh.triangle_area(t) / 3.0;
      for (int k = 0; k < 3; ++k) {
        const int a = tri[k], b = tri[(k + 1) % 3];
        const Vec2 mid = (mesh.vertices()[a] + mesh.vertices()[b]) * 0.5;
        const double fv = rp_.f_n(mid);
        load_[a] += 0.5 * w * fv;
        load_[b] += 0.5 * w * fv;
      }
    }
  }

  const int order = rp_.spec().boundary_quad_order;
  for (const auto& e : mesh.boundary_edges()) {
    for (const auto& qp : boundary_quadrature(e, mesh, order)) {
      const BoundaryPoint bp = make_boundary_point(qp.point, e.normal);
      const double t = edge_parameter(mesh, e, qp.point);
      const double lv = rp_.lambda_n(bp), gv = rp_.g_n(bp);
      lambda_bar_[e.a] += qp.weight * (1.0 - t) * lv;
      lambda_bar_[e.b] += qp.weight * t * lv;
      g_bar_[e.a] += qp.weight * (1.0 - t) * gv;
      g_bar_[e.b] += qp.weight * t * gv;
    }
  }
}

Eigen::VectorXd Assembler::residual(const DiscreteField& u,
                                    const std::vector<double>* frozen_trace) const {
  const Mesh2D& mesh = rp_.mesh();
  const int nv = mesh.vertex_count();
  if (u.size() != nv) throw std::invalid_argument("Assembler: field size mismatch");
  for (double v : u.values()) {
    if (!std::isfinite(v)) throw std::invalid_argument("Assembler: non-finite nodal value");
  }

  Eigen::VectorXd r = -load_;

  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tri = mesh.triangles()[t];
    const auto grads = mesh.shape_gradients(t);
    Vec2 xi{0.0, 0.0};
    for (int k = 0; k < 3; ++k) xi = xi + grads[k] * u[tri[k]];
    // a(x, xi) with xi constant on t; x-quadrature by the 3-midpoint rule.
    Vec2 flux{0.0, 0.0};
    const double w = mesh.triangle_area(t) / 3.0;
    for (int k = 0; k < 3; ++k) {
      const Vec2 mid = (mesh.vertices()[tri[k]] + mesh.vertices()[tri[(k + 1) % 3]]) * 0.5;
      flux = flux + rp_.spec().flux.a(mid, xi) * w;
    }
    for (int k = 0; k < 3; ++k) r[tri[k]] += flux.dot(grads[k]);
  }

  if (scheme_ == BoundaryScheme::Lumped) {
    for (int i = 0; i < nv; ++i) {
      if (lambda_bar_[i] != 0.0) r[i] += lambda_bar_[i] * rp_.sigma_n(u[i]);
      if (g_bar_[i] != 0.0) {
        const double s = frozen_trace ? (*frozen_trace)[i] : u[i];
        r[i] -= g_bar_[i] * signed_source_factor(rp_, s);
      }
    }
  } else {
    const int order = rp_.spec().boundary_quad_order;
    for (const auto& e : mesh.boundary_edges()) {
      for (const auto& qp : boundary_quadrature(e, mesh, order)) {
        const BoundaryPoint bp = make_boundary_point(qp.point, e.normal);
        const double t = edge_parameter(mesh, e, qp.point);
        const double uq = (1.0 - t) * u[e.a] + t * u[e.b];
        const double sq = frozen_trace
                              ? (1.0 - t) * (*frozen_trace)[e.a] + t * (*frozen_trace)[e.b]
                              : uq;
        const double absorb = rp_.lambda_n(bp) * rp_.sigma_n(uq);
        const double gq = rp_.g_n(bp);
        const double source = gq == 0.0 ? 0.0 : gq * signed_source_factor(rp_, sq);
        r[e.a] += qp.weight * (1.0 - t) * (absorb - source);
        r[e.b] += qp.weight * t * (absorb - source);
      }
    }
  }
  return r;
}

SparseOperator Assembler::jacobian(const DiscreteField& u, bool frozen_source) const {
  const Mesh2D& mesh = rp_.mesh();
  SparseOperator op;
  op.dim = mesh.vertex_count();
  op.triplets.reserve(9 * mesh.triangle_count() + 4 * mesh.boundary_edges().size());

  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tri = mesh.triangles()[t];
    const auto grads = mesh.shape_gradients(t);
    Vec2 xi{0.0, 0.0};
    for (int k = 0; k < 3; ++k) xi = xi + grads[k] * u[tri[k]];
    Mat2 dsum{};
    const double w = mesh.triangle_area(t) / 3.0;
    for (int k = 0; k < 3; ++k) {
      const Vec2 mid = (mesh.vertices()[tri[k]] + mesh.vertices()[tri[(k + 1) % 3]]) * 0.5;
      const Mat2 d = rp_.spec().flux.tangent(mid, xi, kGradientFloor);
      dsum.a11 += w * d.a11;
      dsum.a12 += w * d.a12;
      dsum.a21 += w * d.a21;
      dsum.a22 += w * d.a22;
    }
    for (int i = 0; i < 3; ++i) {
      const Vec2 dgi = dsum.apply(grads[i]);
      for (int j = 0; j < 3; ++j) {
        op.triplets.emplace_back(tri[i], tri[j], dgi.dot(grads[j]));
      }
    }
  }

  if (scheme_ == BoundaryScheme::Lumped) {
    for (int i = 0; i < op.dim; ++i) {
      double diag = 0.0;
      if (lambda_bar_[i] != 0.0) diag += lambda_bar_[i] * rp_.dsigma_n(u[i]);
      if (!frozen_source && g_bar_[i] != 0.0) diag -= g_bar_[i] * rp_.dsource_factor(u[i]);
      if (diag != 0.0) op.triplets.emplace_back(i, i, diag);
    }
  } else {
    const int order = rp_.spec().boundary_quad_order;
    for (const auto& e : mesh.boundary_edges()) {
      for (const auto& qp : boundary_quadrature(e, mesh, order)) {
        const BoundaryPoint bp = make_boundary_point(qp.point, e.normal);
        const double t = edge_parameter(mesh, e, qp.point);
        const double uq = (1.0 - t) * u[e.a] + t * u[e.b];
        double coef = rp_.lambda_n(bp) * rp_.dsigma_n(uq);
        if (!frozen_source) {
          const double gq = rp_.g_n(bp);
          if (gq != 0.0) coef -= gq * rp_.dsource_factor(uq);
        }
        if (coef == 0.0) continue;
        const double w = qp.weight * coef;
        op.triplets.emplace_back(e.a, e.a, w * (1.0 - t) * (1.0 - t));
        op.triplets.emplace_back(e.a, e.b, w * (1.0 - t) * t);
        op.triplets.emplace_back(e.b, e.a, w * t * (1.0 - t));
        op.triplets.emplace_back(e.b, e.b, w * t * t);
      }
    }
  }
  return op;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> Assembler::boundary_contributions(
    const DiscreteField& u) const {
  const Mesh2D& mesh = rp_.mesh();
  Eigen::VectorXd absorb = Eigen::VectorXd::Zero(u.size());
  Eigen::VectorXd source = Eigen::VectorXd::Zero(u.size());
  if (scheme_ == BoundaryScheme::Lumped) {
    for (int i = 0; i < u.size(); ++i) {
      if (lambda_bar_[i] != 0.0) absorb[i] = lambda_bar_[i] * rp_.sigma_n(u[i]);
      if (g_bar_[i] != 0.0) source[i] = g_bar_[i] * signed_source_factor(rp_, u[i]);
    }
  } else {
    const int order = rp_.spec().boundary_quad_order;
    for (const auto& e : mesh.boundary_edges()) {
      for (const auto& qp : boundary_quadrature(e, mesh, order)) {
        const BoundaryPoint bp = make_boundary_point(qp.point, e.normal);
        const double t = edge_parameter(mesh, e, qp.point);
        const double uq = (1.0 - t) * u[e.a] + t * u[e.b];
        const double av = rp_.lambda_n(bp) * rp_.sigma_n(uq);
        const double gq = rp_.g_n(bp);
        const double sv = gq == 0.0 ? 0.0 : gq * signed_source_factor(rp_, uq);
        absorb[e.a] += qp.weight * (1.0 - t) * av;
        absorb[e.b] += qp.weight * t * av;
        source[e.a] += qp.weight * (1.0 - t) * sv;
        source[e.b] += qp.weight * t * sv;
      }
    }
  }
  return {std::move(absorb), std::move(source)};
}

double Assembler::absorption_integral(const DiscreteField& u) const {
  return boundary_contributions(u).first.sum();
}

double Assembler::source_integral(const DiscreteField& u) const {
  return boundary_contributions(u).second.sum();
}

AssembledResidual assemble_residual(const RegularizedProblem& rp, const DiscreteField& u,
                                    BoundaryScheme scheme, bool with_jacobian) {
  Assembler a(rp, scheme);
  AssembledResidual out;
  out.residual = a.residual(u);
  if (with_jacobian) out.jacobian = a.jacobian(u);
  return out;
}

SparseOperator assemble_jacobian(const RegularizedProblem& rp, const DiscreteField& u) {
  return Assembler(rp).jacobian(u);
}

double boundary_integral(const Mesh2D& mesh,
                         const std::function<double(const BoundaryPoint&)>& fn, int order) {
  double s = 0.0;
  for (const auto& e : mesh.boundary_edges()) {
    for (const auto& qp : boundary_quadrature(e, mesh, order)) {
      s += qp.weight * fn(make_boundary_point(qp.point, e.normal));
    }
  }
  return s;
}

}  // namespace robinfem
