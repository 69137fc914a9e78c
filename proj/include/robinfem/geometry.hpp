#pragma once

#include <cmath>

namespace robinfem {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2() = default;
  Vec2(double x_, double y_) : x(x_), y(y_) {}

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double norm() const { return std::hypot(x, y); }
  double norm2() const { return x * x + y * y; }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

// Point on the domain boundary together with the geometric context some
// boundary data need: the unit outward normal of the carrying edge and the
// polar angle about the origin (data on the disk are functions of theta).
struct BoundaryPoint {
  Vec2 x;
  Vec2 normal;
  double theta = 0.0;  // atan2(y, x), in (-pi, pi]
};

inline BoundaryPoint make_boundary_point(const Vec2& x, const Vec2& normal) {
  return BoundaryPoint{x, normal, std::atan2(x.y, x.x)};
}

}  // namespace robinfem
