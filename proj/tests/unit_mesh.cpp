#include <doctest.h>

#include <stdexcept>
#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "robinfem/mesh.hpp"

using namespace robinfem;

TEST_CASE("unit square counts and area") {
  auto m2 = generate_unit_square(2);
  CHECK(m2->vertex_count() == 9);
  CHECK(m2->triangle_count() == 8);
  CHECK(m2->boundary_edges().size() == 8);

  auto m4 = generate_unit_square(4);
  CHECK(m4->vertex_count() == 25);
  CHECK(m4->triangle_count() == 32);
  CHECK(m4->boundary_edges().size() == 16);

  for (int m : {2, 3, 5, 8}) {
    CHECK(generate_unit_square(m)->total_area() == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(generate_unit_square(1), std::invalid_argument);
}

TEST_CASE("disk mesh geometry") {
  for (int m : {16, 64}) {
    auto mesh = generate_unit_disk(m);
    const int nseg = static_cast<int>(mesh->boundary_edges().size());
    // odd segment count: a vertex sits at theta = pi, none at theta = 0
    CHECK(nseg % 2 == 1);
    CHECK(nseg >= m);
    CHECK(nseg <= m + 1);

    bool has_pi_vertex = false;
    for (int i = 0; i < mesh->vertex_count(); ++i) {
      const Vec2 v = mesh->vertices()[i];
      CHECK(v.norm2() <= 1.0 + 1e-12);
      if (mesh->boundary_vertex_flags()[i]) {
        CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-12));
        const double theta = std::atan2(v.y, v.x);
        if (std::abs(std::abs(theta) - M_PI) < 1e-12) has_pi_vertex = true;
        CHECK(std::abs(theta) > M_PI / (4.0 * m));
      }
    }
    CHECK(has_pi_vertex);
  }
  CHECK_THROWS_AS(generate_unit_disk(3), std::invalid_argument);
}

TEST_CASE("disk area matches the inscribed polygon") {
  auto mesh = generate_unit_disk(64);
  const double n = static_cast<double>(mesh->boundary_edges().size());
  // oracle computed before building: inscribed regular n-gon area
  const double polygon = 0.5 * n * std::sin(2.0 * M_PI / n);
  CHECK(mesh->total_area() == doctest::Approx(polygon).epsilon(1e-12));
  CHECK(std::abs(mesh->total_area() - M_PI) <= 2e-3 * M_PI);
}

TEST_CASE("refinement: square m=2 refined equals square m=4 up to reordering") {
  auto coarse = generate_unit_square(2);
  auto refined = refine_uniform(*coarse);
  auto direct = generate_unit_square(4);
  REQUIRE(refined->vertex_count() == direct->vertex_count());
  CHECK(refined->triangle_count() == 4 * coarse->triangle_count());

  auto key = [](const Vec2& v) { return std::pair(std::round(v.x * 1e12), std::round(v.y * 1e12)); };
  std::set<std::pair<double, double>> a, b;
  for (const auto& v : refined->vertices()) a.insert(key(v));
  for (const auto& v : direct->vertices()) b.insert(key(v));
  CHECK(a == b);

  CHECK(refined->max_edge_length() ==
        doctest::Approx(0.5 * coarse->max_edge_length()).epsilon(1e-12));
  CHECK(refined->total_area() == doctest::Approx(coarse->total_area()).epsilon(1e-12));
}

TEST_CASE("refinement re-projects disk boundary onto the circle") {
  auto mesh = refine_uniform(*generate_unit_disk(16));
  for (int i = 0; i < mesh->vertex_count(); ++i) {
    if (mesh->boundary_vertex_flags()[i]) {
      CHECK(mesh->vertices()[i].norm() == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  CHECK(mesh->boundary_edges().size() == 2 * generate_unit_disk(16)->boundary_edges().size());
}

TEST_CASE("boundary normals are unit, tangent-orthogonal and outward") {
  for (auto mesh : {generate_unit_square(4), generate_unit_disk(16)}) {
    for (const auto& e : mesh->boundary_edges()) {
      const Vec2 a = mesh->vertices()[e.a], b = mesh->vertices()[e.b];
      const Vec2 t = (b - a) * (1.0 / e.length);
      CHECK(std::abs(e.normal.norm() - 1.0) <= 1e-12);
      CHECK(std::abs(e.normal.dot(t)) <= 1e-12);
    }
    // mesh construction already asserts Euler and outwardness; spot-check Euler here
    const long E = mesh->interior_edge_count() + static_cast<long>(mesh->boundary_edges().size());
    CHECK(mesh->vertex_count() - E + mesh->triangle_count() == 1);
  }
}

TEST_CASE("generated meshes are Delaunay (within tolerance)") {
  CHECK(generate_unit_square(4)->is_delaunay());
  CHECK(refine_uniform(*generate_unit_square(4))->is_delaunay());
  for (int m : {8, 16, 64}) CHECK(generate_unit_disk(m)->is_delaunay());
  // boundary re-projection tips the polar trapezoid diagonals past the
  // circumcircle criterion, so refined disks are not Delaunay in general
  CHECK(!refine_uniform(*generate_unit_disk(16))->is_delaunay());
}

TEST_CASE("Gauss quadrature on boundary edges") {
  auto mesh = generate_unit_square(2);
  const auto& e = mesh->boundary_edges().front();

  SUBCASE("order 1: midpoint with the full edge weight") {
    const auto pts = boundary_quadrature(e, *mesh, 1);
    REQUIRE(pts.size() == 1);
    const Vec2 mid = (mesh->vertices()[e.a] + mesh->vertices()[e.b]) * 0.5;
    CHECK((pts[0].point - mid).norm() <= 1e-14);
    CHECK(pts[0].weight == doctest::Approx(e.length).epsilon(1e-14));
  }

  SUBCASE("weights sum to the edge length") {
    for (int order = 1; order <= 8; ++order) {
      double s = 0.0;
      for (const auto& qp : boundary_quadrature(e, *mesh, order)) s += qp.weight;
      CHECK(s == doctest::Approx(e.length).epsilon(1e-14));
    }
  }

  SUBCASE("order 4 integrates s^3 exactly on the edge") {
    // oracle: int_0^L s^3 ds = L^4/4 with s the arclength from vertex a
    const Vec2 a = mesh->vertices()[e.a], b = mesh->vertices()[e.b];
    double integral = 0.0;
    for (const auto& qp : boundary_quadrature(e, *mesh, 4)) {
      const double s = (qp.point - a).norm();
      integral += qp.weight * s * s * s;
    }
    const double L = e.length;
    CHECK(integral == doctest::Approx(L * L * L * L / 4.0).epsilon(1e-13));
    (void)b;
  }

  SUBCASE("nodes strictly interior for every order") {
    for (int order = 1; order <= 8; ++order) {
      for (const auto& qp : boundary_quadrature(e, *mesh, order)) {
        const Vec2 a = mesh->vertices()[e.a], b = mesh->vertices()[e.b];
        const double t = (qp.point - a).dot(b - a) / (b - a).norm2();
        CHECK(t > 0.0);
        CHECK(t < 1.0);
      }
    }
    CHECK_THROWS_AS(boundary_quadrature(e, *mesh, 9), std::invalid_argument);
  }
}

TEST_CASE("mesh text round trip") {
  auto mesh = generate_unit_disk(8);
  std::stringstream ss;
  mesh->write_text(ss);
  const Mesh2D back = Mesh2D::read_text(ss);
  CHECK(back.vertex_count() == mesh->vertex_count());
  CHECK(back.triangle_count() == mesh->triangle_count());
  CHECK(back.boundary_edges().size() == mesh->boundary_edges().size());
  CHECK(back.total_area() == doctest::Approx(mesh->total_area()).epsilon(1e-15));
}

TEST_CASE("field CSV and VTK writers") {
  auto mesh = generate_unit_square(2);
  DiscreteField f(mesh, 1.5);
  std::stringstream csv;
  f.write_csv(csv, {"robinfem test"});
  CHECK(csv.str().rfind("# robinfem test", 0) == 0);
  CHECK(csv.str().find("vertex_id,x,y,value") != std::string::npos);
  std::stringstream vtk;
  f.write_vtk(vtk);
  CHECK(vtk.str().rfind("# vtk DataFile", 0) == 0);
  CHECK(vtk.str().find("CELL_TYPES") != std::string::npos);
}

TEST_CASE("lumped measures partition area and perimeter") {
  auto mesh = generate_unit_square(3);
  double a = 0.0, b = 0.0;
  for (double v : mesh->lumped_interior_measure()) a += v;
  for (double v : mesh->lumped_boundary_measure()) b += v;
  CHECK(a == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(b == doctest::Approx(4.0).epsilon(1e-12));
}
