#pragma once

#include <array>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "robinfem/geometry.hpp"

namespace robinfem {

struct BoundaryEdge {
  int a = -1;               // vertex indices, ordered so the domain lies left
  int b = -1;
  int tri = -1;             // the unique adjacent triangle
  Vec2 normal;              // unit outward
  double length = 0.0;
};

// Conforming triangulation of a plane domain with oriented boundary edges.
// Immutable after construction; refinement returns a new mesh.
class Mesh2D {
 public:
  enum class Domain { Square, Disk, Generic };

  Mesh2D(Domain domain, std::vector<Vec2> vertices,
         std::vector<std::array<int, 3>> triangles);

  Domain domain() const { return domain_; }
  const std::vector<Vec2>& vertices() const { return vertices_; }
  const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
  const std::vector<BoundaryEdge>& boundary_edges() const { return boundary_edges_; }
  const std::vector<std::uint8_t>& boundary_vertex_flags() const { return boundary_vertex_; }

  int vertex_count() const { return static_cast<int>(vertices_.size()); }
  int triangle_count() const { return static_cast<int>(triangles_.size()); }
  int interior_edge_count() const { return interior_edge_count_; }

  double triangle_area(int t) const { return areas_[t]; }
  double total_area() const;
  double boundary_length() const;
  double max_edge_length() const;

  // Per-vertex measures: |supp phi_i|/3 on Omega and the boundary hat mass
  // on the polygonal boundary (0 for interior vertices).
  const std::vector<double>& lumped_interior_measure() const { return lumped_area_; }
  const std::vector<double>& lumped_boundary_measure() const { return lumped_boundary_; }

  // Constant gradients of the three P1 hat functions on triangle t.
  std::array<Vec2, 3> shape_gradients(int t) const;

  // Opposite-angle test on every interior edge (sum <= pi + tol).
  bool is_delaunay(double tol = 1e-9) const;

  void write_text(std::ostream& os) const;
  static Mesh2D read_text(std::istream& is);

 private:
  void build_topology();
  void check_invariants() const;

  Domain domain_;
  std::vector<Vec2> vertices_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<double> areas_;
  std::vector<BoundaryEdge> boundary_edges_;
  std::vector<std::uint8_t> boundary_vertex_;
  std::vector<double> lumped_area_;
  std::vector<double> lumped_boundary_;
  int interior_edge_count_ = 0;
};

using MeshPtr = std::shared_ptr<const Mesh2D>;

// Structured triangulation of [0,1]^2 with (m+1)^2 vertices, 2m^2 triangles
// and 4m boundary edges. m >= 2.
MeshPtr generate_unit_square(int m);

// Polar triangulation of the unit disk: rings of equally spaced vertices, a
// fan at the center, boundary vertices exactly on the circle. One boundary
// vertex sits at theta = pi and none within pi/(4m) of theta = 0 (data with
// a singularity at theta = 0 are a primary use case), which forces an odd
// segment count: m segments when m is odd, m+1 when m is even. m >= 4.
MeshPtr generate_unit_disk(int m);

// Splits every triangle in four through the edge midpoints; disk boundary
// midpoints are re-projected onto the unit circle.
MeshPtr refine_uniform(const Mesh2D& mesh);

struct QuadPoint {
  Vec2 point;
  double weight;
};

// Gauss-Legendre nodes mapped to the edge segment; weights sum to the edge
// length and all nodes are strictly interior. order in {1..8}.
std::vector<QuadPoint> boundary_quadrature(const BoundaryEdge& edge,
                                           const Mesh2D& mesh, int order);

// Nodes/weights on [-1,1] (weights sum to 2), computed once per order.
const std::vector<std::pair<double, double>>& gauss_legendre(int order);

// Piecewise-linear function given by one value per mesh vertex.
class DiscreteField {
 public:
  DiscreteField(MeshPtr mesh, std::vector<double> values);
  DiscreteField(MeshPtr mesh, double fill = 0.0);

  const MeshPtr& mesh() const { return mesh_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }
  double operator[](int i) const { return values_[i]; }
  double& operator[](int i) { return values_[i]; }
  int size() const { return static_cast<int>(values_.size()); }

  double min_value() const;
  double min_boundary_value() const;
  double max_abs() const;
  double max_abs_diff(const DiscreteField& other) const;

  // Value of the interpolant at a point of a boundary edge.
  double edge_value(const BoundaryEdge& e, const Vec2& x) const;

  void write_csv(std::ostream& os, const std::vector<std::string>& header_lines = {}) const;
  void write_vtk(std::ostream& os, const std::string& name = "u",
                 const std::string& title = "robinfem field") const;

 private:
  MeshPtr mesh_;
  std::vector<double> values_;
};

}  // namespace robinfem
