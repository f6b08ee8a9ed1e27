// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

namespace csvg {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Vec3 operator+(const Vec3 &o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3 &o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  bool operator==(const Vec3 &o) const { return x == o.x && y == o.y && z == o.z; }

  double dot(const Vec3 &o) const { return x * o.x + y * o.y + z * o.z; }
  Vec3 cross(const Vec3 &o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double norm() const { return std::sqrt(dot(*this)); }
  Vec3 normalized() const {
    double n = norm();
    return n > 0.0 ? Vec3{x / n, y / n, z / n} : Vec3{};
  }
};

using Point3 = Vec3;

// Axis-aligned box, stored as the two extreme corners with min <= max per axis.
struct Aabb {
  Point3 min_corner;
  Point3 max_corner;

  bool operator==(const Aabb &o) const {
    return min_corner == o.min_corner && max_corner == o.max_corner;
  }

  bool valid() const {
    return min_corner.x <= max_corner.x && min_corner.y <= max_corner.y &&
           min_corner.z <= max_corner.z;
  }
  Point3 center() const { return (min_corner + max_corner) * 0.5; }
  Vec3 extents() const { return max_corner - min_corner; }
  double volume() const {
    Vec3 e = extents();
    return e.x * e.y * e.z;
  }
  bool contains(const Point3 &p) const {
    return p.x >= min_corner.x && p.x <= max_corner.x && p.y >= min_corner.y &&
           p.y <= max_corner.y && p.z >= min_corner.z && p.z <= max_corner.z;
  }
  void expand(const Aabb &o) {
    min_corner.x = std::min(min_corner.x, o.min_corner.x);
    min_corner.y = std::min(min_corner.y, o.min_corner.y);
    min_corner.z = std::min(min_corner.z, o.min_corner.z);
    max_corner.x = std::max(max_corner.x, o.max_corner.x);
    max_corner.y = std::max(max_corner.y, o.max_corner.y);
    max_corner.z = std::max(max_corner.z, o.max_corner.z);
  }

  static Aabb of_points(const std::vector<Point3> &pts) {
    Aabb box{pts.front(), pts.front()};
    for (const Point3 &p : pts) box.expand(Aabb{p, p});
    return box;
  }
};

inline double horizontal_distance(const Point3 &a, const Point3 &b) {
  double dx = a.x - b.x, dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

}  // namespace csvg
