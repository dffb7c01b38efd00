// Internal helpers shared by the scheme builders. Not installed.
#ifndef GSLAB_SCHEME_COMMON_HPP
#define GSLAB_SCHEME_COMMON_HPP

#include <array>
#include <vector>

#include "gslab/gd.hpp"
#include "gslab/mesh.hpp"

namespace gslab::detail {

/// Gradients of the barycentric coordinates of a CCW triangle (a, b, c).
inline std::array<Vec2, 3> barycentric_gradients(const Vec2& a, const Vec2& b, const Vec2& c) {
  const double twice_area = (b - a).x() * (c - a).y() - (b - a).y() * (c - a).x();
  auto perp = [](const Vec2& v) { return Vec2(-v.y(), v.x()); };
  return {perp(c - b) / twice_area, perp(a - c) / twice_area, perp(b - a) / twice_area};
}

/// Barycentric coordinates of x in triangle (a, b, c).
inline std::array<double, 3> barycentric_coords(const Vec2& x, const Vec2& a, const Vec2& b,
                                                const Vec2& c) {
  const auto g = barycentric_gradients(a, b, c);
  return {1.0 + g[0].dot(x - a), 1.0 + g[1].dot(x - b), 1.0 + g[2].dot(x - c)};
}

inline double diameter(const std::vector<Vec2>& pts) {
  double d = 0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      d = std::max(d, (pts[i] - pts[j]).norm());
  return d;
}

/// Distance from a point to a (closed) triangle.
inline double point_triangle_distance(const Vec2& p, const Vec2& a, const Vec2& b, const Vec2& c) {
  const auto bc = barycentric_coords(p, a, b, c);
  if (bc[0] >= 0 && bc[1] >= 0 && bc[2] >= 0) return 0.0;
  auto seg = [&](const Vec2& u, const Vec2& v) {
    const Vec2 d = v - u;
    const double t = std::clamp((p - u).dot(d) / d.squaredNorm(), 0.0, 1.0);
    return (p - (u + t * d)).norm();
  };
  return std::min({seg(a, b), seg(b, c), seg(c, a)});
}

inline double point_triangles_distance(const Vec2& p,
                                       const std::vector<std::array<Vec2, 3>>& tris) {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& t : tris) d = std::min(d, point_triangle_distance(p, t[0], t[1], t[2]));
  return d;
}

/// Local vertex index within a cell's CCW cycle.
inline int local_vertex(const Cell& c, int v) {
  for (std::size_t i = 0; i < c.vertices.size(); ++i)
    if (c.vertices[i] == v) return int(i);
  return -1;
}

}  // namespace gslab::detail

#endif
