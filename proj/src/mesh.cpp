#include "robinfem/mesh.hpp"

#include "robinfem/functions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace robinfem {

namespace {

double signed_area(const Vec2& a, const Vec2& b, const Vec2& c) {
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x));
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

Mesh2D::Mesh2D(Domain domain, std::vector<Vec2> vertices,
               std::vector<std::array<int, 3>> triangles)
    : domain_(domain), vertices_(std::move(vertices)), triangles_(std::move(triangles)) {
  build_topology();
  check_invariants();
}

void Mesh2D::build_topology() {
  const int nv = vertex_count();
  areas_.resize(triangles_.size());
  lumped_area_.assign(nv, 0.0);
  for (size_t t = 0; t < triangles_.size(); ++t) {
    const auto& tri = triangles_[t];
    const double a = signed_area(vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]);
    if (a <= 0.0) {
      std::ostringstream os;
      os << "Mesh2D: triangle " << t << " has nonpositive area " << a;
      throw std::runtime_error(os.str());
    }
    areas_[t] = a;
    for (int k = 0; k < 3; ++k) lumped_area_[tri[k]] += a / 3.0;
  }

  // Edge incidence: boundary edges are those seen by exactly one triangle.
  std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> edges;  // -> (tri, local)
  for (size_t t = 0; t < triangles_.size(); ++t) {
    const auto& tri = triangles_[t];
    for (int k = 0; k < 3; ++k) {
      const int a = tri[k], b = tri[(k + 1) % 3];
      edges[{std::min(a, b), std::max(a, b)}].push_back({static_cast<int>(t), k});
    }
  }

  boundary_edges_.clear();
  boundary_vertex_.assign(nv, 0);
  lumped_boundary_.assign(nv, 0.0);
  interior_edge_count_ = 0;
  for (const auto& [key, inc] : edges) {
    if (inc.size() == 2) {
      ++interior_edge_count_;
      continue;
    }
    if (inc.size() != 1) {
      throw std::runtime_error("Mesh2D: edge shared by more than two triangles");
    }
    const auto [t, k] = inc[0];
    BoundaryEdge e;
    e.a = triangles_[t][k];
    e.b = triangles_[t][(k + 1) % 3];
    e.tri = t;
    const Vec2 d = vertices_[e.b] - vertices_[e.a];
    e.length = d.norm();
    // Triangles are counterclockwise with the domain left of a->b.
    e.normal = Vec2{d.y / e.length, -d.x / e.length};
    boundary_edges_.push_back(e);
    boundary_vertex_[e.a] = 1;
    boundary_vertex_[e.b] = 1;
    lumped_boundary_[e.a] += 0.5 * e.length;
    lumped_boundary_[e.b] += 0.5 * e.length;
  }
  std::sort(boundary_edges_.begin(), boundary_edges_.end(),
            [](const BoundaryEdge& l, const BoundaryEdge& r) {
              return std::pair(l.a, l.b) < std::pair(r.a, r.b);
            });
}

void Mesh2D::check_invariants() const {
  for (const auto& e : boundary_edges_) {
    const Vec2 a = vertices_[e.a], b = vertices_[e.b];
    if (std::abs(e.normal.norm() - 1.0) > 1e-12) {
      throw std::runtime_error("Mesh2D: boundary normal not unit");
    }
    const Vec2 tangent = (b - a) * (1.0 / e.length);
    if (std::abs(e.normal.dot(tangent)) > 1e-12) {
      throw std::runtime_error("Mesh2D: boundary normal not orthogonal to edge");
    }
    const auto& tri = triangles_[e.tri];
    const Vec2 centroid{(vertices_[tri[0]].x + vertices_[tri[1]].x + vertices_[tri[2]].x) / 3.0,
                        (vertices_[tri[0]].y + vertices_[tri[1]].y + vertices_[tri[2]].y) / 3.0};
    const Vec2 mid = (a + b) * 0.5;
    if (e.normal.dot(mid - centroid) <= 0.0) {
      throw std::runtime_error("Mesh2D: boundary normal points into the domain");
    }
    if (std::abs((b - a).norm() - e.length) > 1e-10 * std::max(1.0, e.length)) {
      throw std::runtime_error("Mesh2D: stored boundary length inconsistent");
    }
  }
  // Euler formula for a disk-like domain (outer face excluded).
  const long v = vertex_count();
  const long f = triangle_count();
  const long e = interior_edge_count_ + static_cast<long>(boundary_edges_.size());
  if (v - e + f != 1) {
    throw std::runtime_error("Mesh2D: Euler characteristic is not 1 (domain not disk-like)");
  }
}

double Mesh2D::total_area() const {
  double s = 0.0;
  for (double a : areas_) s += a;
  return s;
}

double Mesh2D::boundary_length() const {
  double s = 0.0;
  for (const auto& e : boundary_edges_) s += e.length;
  return s;
}

double Mesh2D::max_edge_length() const {
  double m = 0.0;
  for (const auto& tri : triangles_) {
    for (int k = 0; k < 3; ++k) {
      m = std::max(m, (vertices_[tri[k]] - vertices_[tri[(k + 1) % 3]]).norm());
    }
  }
  return m;
}

std::array<Vec2, 3> Mesh2D::shape_gradients(int t) const {
  const auto& tri = triangles_[t];
  const Vec2 a = vertices_[tri[0]], b = vertices_[tri[1]], c = vertices_[tri[2]];
  const double inv2A = 1.0 / (2.0 * areas_[t]);
  return {Vec2{(b.y - c.y) * inv2A, (c.x - b.x) * inv2A},
          Vec2{(c.y - a.y) * inv2A, (a.x - c.x) * inv2A},
          Vec2{(a.y - b.y) * inv2A, (b.x - a.x) * inv2A}};
}

bool Mesh2D::is_delaunay(double tol) const {
  std::map<std::pair<int, int>, std::vector<int>> opposite;  // edge -> opposite vertices
  for (const auto& tri : triangles_) {
    for (int k = 0; k < 3; ++k) {
      const int a = tri[k], b = tri[(k + 1) % 3], c = tri[(k + 2) % 3];
      opposite[{std::min(a, b), std::max(a, b)}].push_back(c);
    }
  }
  for (const auto& [key, opp] : opposite) {
    if (opp.size() != 2) continue;
    const Vec2 pa = vertices_[key.first], pb = vertices_[key.second];
    double angle_sum = 0.0;
    for (int c : opp) {
      const Vec2 u = pa - vertices_[c], v = pb - vertices_[c];
      angle_sum += std::atan2(std::abs(u.x * v.y - u.y * v.x), u.dot(v));
    }
    if (angle_sum > M_PI + tol) return false;
  }
  return true;
}

void Mesh2D::write_text(std::ostream& os) const {
  os << vertex_count() << " vertices " << triangle_count() << " triangles "
     << boundary_edges_.size() << " boundary_edges\n";
  for (const auto& v : vertices_) os << fmt17(v.x) << " " << fmt17(v.y) << "\n";
  for (const auto& t : triangles_) os << t[0] << " " << t[1] << " " << t[2] << "\n";
  for (const auto& e : boundary_edges_) {
    os << e.a << " " << e.b << " " << e.tri << " " << fmt17(e.normal.x) << " "
       << fmt17(e.normal.y) << " " << fmt17(e.length) << "\n";
  }
}

Mesh2D Mesh2D::read_text(std::istream& is) {
  int nv = 0, nt = 0, nb = 0;
  std::string w1, w2, w3;
  if (!(is >> nv >> w1 >> nt >> w2 >> nb >> w3) || w1 != "vertices" ||
      w2 != "triangles" || w3 != "boundary_edges") {
    throw std::runtime_error("Mesh2D::read_text: malformed header");
  }
  std::vector<Vec2> vs(nv);
  for (auto& v : vs) is >> v.x >> v.y;
  std::vector<std::array<int, 3>> ts(nt);
  for (auto& t : ts) is >> t[0] >> t[1] >> t[2];
  for (int i = 0; i < nb; ++i) {  // boundary rows are re-derived from topology
    int a, b, tri;
    double nx, ny, len;
    is >> a >> b >> tri >> nx >> ny >> len;
  }
  if (!is) throw std::runtime_error("Mesh2D::read_text: truncated file");
  Mesh2D mesh(Domain::Generic, std::move(vs), std::move(ts));
  if (static_cast<int>(mesh.boundary_edges().size()) != nb) {
    throw std::runtime_error("Mesh2D::read_text: boundary edge count mismatch");
  }
  return mesh;
}

MeshPtr generate_unit_square(int m) {
  if (m < 2) throw std::invalid_argument("generate_unit_square: m must be >= 2");
  std::vector<Vec2> vs;
  vs.reserve((m + 1) * (m + 1));
  for (int j = 0; j <= m; ++j) {
    for (int i = 0; i <= m; ++i) {
      vs.push_back({static_cast<double>(i) / m, static_cast<double>(j) / m});
    }
  }
  auto idx = [m](int i, int j) { return j * (m + 1) + i; };
  std::vector<std::array<int, 3>> ts;
  ts.reserve(2 * m * m);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) {
      ts.push_back({idx(i, j), idx(i + 1, j), idx(i + 1, j + 1)});
      ts.push_back({idx(i, j), idx(i + 1, j + 1), idx(i, j + 1)});
    }
  }
  auto mesh = std::make_shared<Mesh2D>(Mesh2D::Domain::Square, std::move(vs), std::move(ts));
  if (std::abs(mesh->boundary_length() - 4.0) > 4e-10) {
    throw std::runtime_error("generate_unit_square: perimeter defect");
  }
  return mesh;
}

MeshPtr generate_unit_disk(int m) {
  if (m < 4) throw std::invalid_argument("generate_unit_disk: m must be >= 4");
  const int n = (m % 2 == 1) ? m : m + 1;  // odd count: vertex at pi, none at 0
  const int rings = std::max(2, static_cast<int>(std::lround(n / 6.0)));

  std::vector<Vec2> vs;
  vs.push_back({0.0, 0.0});
  for (int j = 1; j <= rings; ++j) {
    const double r = static_cast<double>(j) / rings;
    for (int i = 0; i < n; ++i) {
      const double theta = M_PI + 2.0 * M_PI * i / n;
      vs.push_back({r * std::cos(theta), r * std::sin(theta)});
    }
  }
  auto ring_idx = [n](int j, int i) { return 1 + (j - 1) * n + ((i % n + n) % n); };

  std::vector<std::array<int, 3>> ts;
  for (int i = 0; i < n; ++i) {
    ts.push_back({0, ring_idx(1, i), ring_idx(1, i + 1)});
  }
  for (int j = 1; j < rings; ++j) {
    for (int i = 0; i < n; ++i) {
      ts.push_back({ring_idx(j, i), ring_idx(j + 1, i), ring_idx(j + 1, i + 1)});
      ts.push_back({ring_idx(j, i), ring_idx(j + 1, i + 1), ring_idx(j, i + 1)});
    }
  }
  auto mesh = std::make_shared<Mesh2D>(Mesh2D::Domain::Disk, std::move(vs), std::move(ts));
  const double expected = 2.0 * n * std::sin(M_PI / n);
  if (std::abs(mesh->boundary_length() - expected) > 1e-10 * expected) {
    throw std::runtime_error("generate_unit_disk: perimeter defect");
  }
  return mesh;
}

MeshPtr refine_uniform(const Mesh2D& mesh) {
  std::vector<Vec2> vs = mesh.vertices();
  std::map<std::pair<int, int>, int> midpoint;
  std::map<std::pair<int, int>, bool> is_boundary;
  for (const auto& e : mesh.boundary_edges()) {
    is_boundary[{std::min(e.a, e.b), std::max(e.a, e.b)}] = true;
  }
  auto mid = [&](int a, int b) {
    const auto key = std::make_pair(std::min(a, b), std::max(a, b));
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    Vec2 p = (vs[a] + vs[b]) * 0.5;
    if (mesh.domain() == Mesh2D::Domain::Disk && is_boundary.count(key)) {
      const double r = p.norm();
      p = p * (1.0 / r);  // back onto the unit circle
    }
    const int id = static_cast<int>(vs.size());
    vs.push_back(p);
    midpoint[key] = id;
    return id;
  };

  std::vector<std::array<int, 3>> ts;
  ts.reserve(4 * mesh.triangle_count());
  for (const auto& tri : mesh.triangles()) {
    const int a = tri[0], b = tri[1], c = tri[2];
    const int ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
    ts.push_back({a, ab, ca});
    ts.push_back({b, bc, ab});
    ts.push_back({c, ca, bc});
    ts.push_back({ab, bc, ca});
  }
  return std::make_shared<Mesh2D>(mesh.domain(), std::move(vs), std::move(ts));
}

const std::vector<std::pair<double, double>>& gauss_legendre(int order) {
  if (order < 1 || order > 8) {
    throw std::invalid_argument("gauss_legendre: order must be in 1..8");
  }
  static std::vector<std::vector<std::pair<double, double>>> cache = [] {
    std::vector<std::vector<std::pair<double, double>>> all(9);
    for (int n = 1; n <= 8; ++n) {
      auto& rule = all[n];
      for (int i = 0; i < n; ++i) {
        // Newton on P_n from the Chebyshev-like initial guess.
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
          double p0 = 1.0, p1 = x;
          for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
          }
          dp = n * (x * p1 - p0) / (x * x - 1.0);
          const double dx = p1 / dp;
          x -= dx;
          if (std::abs(dx) < 1e-16) break;
        }
        rule.push_back({x, 2.0 / ((1.0 - x * x) * dp * dp)});
      }
      std::sort(rule.begin(), rule.end());
    }
    return all;
  }();
  return cache[order];
}

std::vector<QuadPoint> boundary_quadrature(const BoundaryEdge& edge,
                                           const Mesh2D& mesh, int order) {
  const auto& rule = gauss_legendre(order);
  const Vec2 a = mesh.vertices()[edge.a], b = mesh.vertices()[edge.b];
  std::vector<QuadPoint> pts;
  pts.reserve(rule.size());
  for (const auto& [t, w] : rule) {
    pts.push_back({a + (b - a) * (0.5 * (t + 1.0)), 0.5 * w * edge.length});
  }
  return pts;
}

DiscreteField::DiscreteField(MeshPtr mesh, std::vector<double> values)
    : mesh_(std::move(mesh)), values_(std::move(values)) {
  if (static_cast<int>(values_.size()) != mesh_->vertex_count()) {
    throw std::invalid_argument("DiscreteField: value count != vertex count");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("DiscreteField: non-finite value");
  }
}

DiscreteField::DiscreteField(MeshPtr mesh, double fill)
    : mesh_(std::move(mesh)), values_(mesh_->vertex_count(), fill) {}

double DiscreteField::min_value() const {
  return *std::min_element(values_.begin(), values_.end());
}

double DiscreteField::min_boundary_value() const {
  double m = kInfinity;
  const auto& flags = mesh_->boundary_vertex_flags();
  for (int i = 0; i < size(); ++i) {
    if (flags[i]) m = std::min(m, values_[i]);
  }
  return m;
}

double DiscreteField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double DiscreteField::max_abs_diff(const DiscreteField& other) const {
  double m = 0.0;
  for (int i = 0; i < size(); ++i) m = std::max(m, std::abs(values_[i] - other.values_[i]));
  return m;
}

double DiscreteField::edge_value(const BoundaryEdge& e, const Vec2& x) const {
  const Vec2 a = mesh_->vertices()[e.a], b = mesh_->vertices()[e.b];
  const double t = (x - a).dot(b - a) / (b - a).norm2();
  return (1.0 - t) * values_[e.a] + t * values_[e.b];
}

void DiscreteField::write_csv(std::ostream& os,
                              const std::vector<std::string>& header_lines) const {
  for (const auto& h : header_lines) os << "# " << h << "\n";
  os << "vertex_id,x,y,value\n";
  for (int i = 0; i < size(); ++i) {
    const Vec2& v = mesh_->vertices()[i];
    os << i << "," << fmt17(v.x) << "," << fmt17(v.y) << "," << fmt17(values_[i]) << "\n";
  }
}

void DiscreteField::write_vtk(std::ostream& os, const std::string& name,
                              const std::string& title) const {
  os << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << size() << " double\n";
  for (int i = 0; i < size(); ++i) {
    const Vec2& v = mesh_->vertices()[i];
    os << fmt17(v.x) << " " << fmt17(v.y) << " 0\n";
  }
  const auto& ts = mesh_->triangles();
  os << "CELLS " << ts.size() << " " << 4 * ts.size() << "\n";
  for (const auto& t : ts) os << "3 " << t[0] << " " << t[1] << " " << t[2] << "\n";
  os << "CELL_TYPES " << ts.size() << "\n";
  for (size_t t = 0; t < ts.size(); ++t) os << "5\n";
  os << "POINT_DATA " << size() << "\nSCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
  for (double v : values_) os << fmt17(v) << "\n";
}

}  // namespace robinfem
