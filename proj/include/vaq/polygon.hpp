#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vaq/geometry.hpp"
#include "vaq/predicates.hpp"
#include "vaq/random.hpp"

namespace vaq {

namespace detail {

// q lies on the closed segment ab, given that a, b, q are collinear.
inline bool within_box(Vec2 a, Vec2 b, Vec2 q) noexcept {
  return std::min(a.x, b.x) <= q.x && q.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= q.y &&
         q.y <= std::max(a.y, b.y);
}

}  // namespace detail

/// Closed-segment intersection test, exact.
inline bool segments_intersect(Vec2 p1, Vec2 p2, Vec2 q1, Vec2 q2) {
  const int o1 = orient(p1, p2, q1);
  const int o2 = orient(p1, p2, q2);
  const int o3 = orient(q1, q2, p1);
  const int o4 = orient(q1, q2, p2);
  if (o1 * o2 < 0 && o3 * o4 < 0) return true;
  if (o1 == 0 && detail::within_box(p1, p2, q1)) return true;
  if (o2 == 0 && detail::within_box(p1, p2, q2)) return true;
  if (o3 == 0 && detail::within_box(q1, q2, p1)) return true;
  if (o4 == 0 && detail::within_box(q1, q2, p2)) return true;
  return false;
}

/// Simple polygon with non-zero area, stored counter-clockwise. The region
/// is closed: boundary points belong to it.
class Polygon {
public:
  explicit Polygon(std::vector<Vec2> vertices) : vertices_(std::move(vertices)) {
    const std::size_t n = vertices_.size();
    if (n < 3) throw geometry_error("polygon needs at least 3 vertices");
    bounds_ = Rect::inverted();
    for (Vec2 v : vertices_) {
      if (!is_finite(v)) throw geometry_error("polygon vertex is not finite");
      bounds_.expand(v);
    }
    check_simple();
    if (signed_area_sign() < 0) std::reverse(vertices_.begin(), vertices_.end());
  }

  std::span<const Vec2> vertices() const noexcept { return vertices_; }
  std::size_t size() const noexcept { return vertices_.size(); }
  Vec2 operator[](std::size_t i) const noexcept { return vertices_[i]; }
  Vec2 next(std::size_t i) const noexcept { return vertices_[i + 1 == size() ? 0 : i + 1]; }
  Vec2 prev(std::size_t i) const noexcept { return vertices_[i == 0 ? size() - 1 : i - 1]; }
  const Rect& bounds() const noexcept { return bounds_; }

  /// Shoelace area, always positive.
  double area() const noexcept {
    double twice = 0.0;
    for (std::size_t i = 0; i < size(); ++i) {
      const Vec2 a = vertices_[i], b = next(i);
      twice += a.x * b.y - a.y * b.x;
    }
    return std::abs(twice) / 2.0;
  }

  bool is_convex() const {
    for (std::size_t i = 0; i < size(); ++i) {
      if (orient(prev(i), vertices_[i], next(i)) < 0) return false;
    }
    return true;
  }

  friend bool operator==(const Polygon& a, const Polygon& b) { return a.vertices_ == b.vertices_; }

private:
  void check_simple() const {
    const std::size_t n = size();
    for (std::size_t i = 0; i < n; ++i) {
      if (vertices_[i] == next(i)) throw geometry_error("polygon has a zero-length edge");
    }
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 a = vertices_[i], b = next(i);
      for (std::size_t j = i + 1; j < n; ++j) {
        const Vec2 c = vertices_[j], d = next(j);
        const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
        if (!adjacent) {
          if (segments_intersect(a, b, c, d)) throw geometry_error("polygon is not simple");
          continue;
        }
        // Adjacent edges may only share their common vertex.
        const Vec2 shared = (j == i + 1) ? b : a;
        const Vec2 far_i = (j == i + 1) ? a : b;
        const Vec2 far_j = (j == i + 1) ? d : c;
        if (orient(far_i, shared, far_j) == 0 &&
            (detail::within_box(shared, far_i, far_j) || detail::within_box(shared, far_j, far_i))) {
          throw geometry_error("polygon has overlapping adjacent edges");
        }
      }
    }
  }

  int signed_area_sign() const {
    // The lowest-then-leftmost vertex is convex, so its turn gives the winding
    // unless it is a redundant collinear vertex.
    std::size_t k = 0;
    for (std::size_t i = 1; i < size(); ++i) {
      const Vec2 v = vertices_[i], best = vertices_[k];
      if (v.y < best.y || (v.y == best.y && v.x < best.x)) k = i;
    }
    if (const int s = orient(prev(k), vertices_[k], next(k)); s != 0) return s;
    double twice = 0.0;
    for (std::size_t i = 0; i < size(); ++i) {
      const Vec2 a = vertices_[i], b = next(i);
      twice += a.x * b.y - a.y * b.x;
    }
    if (twice == 0.0) throw geometry_error("polygon has zero area");
    return twice > 0.0 ? 1 : -1;
  }

  std::vector<Vec2> vertices_;
  Rect bounds_;
};

inline Rect mbr(const Polygon& area) noexcept { return area.bounds(); }

/// Closed-region containment: boundary points count as inside. Winding
/// number with exact orientation; an on-edge hit returns immediately.
inline bool point_in_polygon(Vec2 p, const Polygon& area) {
  if (!area.bounds().contains(p)) return false;
  int winding = 0;
  const auto verts = area.vertices();
  const std::size_t n = verts.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = verts[i];
    const Vec2 b = verts[i + 1 == n ? 0 : i + 1];
    if ((a.y < p.y && b.y < p.y) || (a.y > p.y && b.y > p.y)) continue;
    const int o = orient(a, b, p);
    if (o == 0 && detail::within_box(a, b, p)) return true;
    if (a.y <= p.y) {
      if (b.y > p.y && o > 0) ++winding;
    } else if (b.y <= p.y && o < 0) {
      --winding;
    }
  }
  return winding != 0;
}

/// True iff the closed segment ab touches the polygon's boundary.
inline bool segment_touches_boundary(Vec2 a, Vec2 b, const Polygon& area) {
  Rect box = Rect::of(a);
  box.expand(b);
  if (!box.intersects(area.bounds())) return false;
  const auto verts = area.vertices();
  const std::size_t n = verts.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 u = verts[i], v = verts[i + 1 == n ? 0 : i + 1];
    if (std::max(u.x, v.x) < box.min_x || std::min(u.x, v.x) > box.max_x ||
        std::max(u.y, v.y) < box.min_y || std::min(u.y, v.y) > box.max_y) {
      continue;
    }
    if (segments_intersect(a, b, u, v)) return true;
  }
  return false;
}

/// True iff the closed segment shares at least one point with the closed
/// polygon region.
inline bool segment_intersects_polygon(const Segment& s, const Polygon& area) {
  Rect box = Rect::of(s.a);
  box.expand(s.b);
  if (!box.intersects(area.bounds())) return false;
  if (point_in_polygon(s.a, area) || point_in_polygon(s.b, area)) return true;
  return segment_touches_boundary(s.a, s.b, area);
}

/// A deterministic point strictly inside the polygon: the vertex centroid for
/// convex polygons, otherwise the centroid of the first ear.
inline Vec2 interior_point(const Polygon& area) {
  const auto verts = area.vertices();
  if (area.is_convex()) {
    double sx = 0.0, sy = 0.0;
    for (Vec2 v : verts) {
      sx += v.x;
      sy += v.y;
    }
    const auto n = static_cast<double>(verts.size());
    return {sx / n, sy / n};
  }

  // Drop redundant collinear vertices so every remaining corner is a real turn.
  std::vector<Vec2> ring;
  for (std::size_t i = 0; i < verts.size(); ++i) {
    if (orient(area.prev(i), verts[i], area.next(i)) != 0) ring.push_back(verts[i]);
  }
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = ring[(i + n - 1) % n], b = ring[i], c = ring[(i + 1) % n];
    if (orient(a, b, c) <= 0) continue;
    bool empty = true;
    for (std::size_t j = 0; j < n && empty; ++j) {
      if (j == i || j == (i + 1) % n || j == (i + n - 1) % n) continue;
      const Vec2 q = ring[j];
      empty = !(orient(a, b, q) >= 0 && orient(b, c, q) >= 0 && orient(c, a, q) >= 0);
    }
    if (empty) return {(a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0};
  }
  throw geometry_error("interior_point: no ear found");
}

inline constexpr std::size_t kQueryPolygonVertices = 10;
inline constexpr double kQueryPolygonMinRadius = 1.0 / 3.0;

/// Random star-shaped query polygon with kQueryPolygonVertices vertices,
/// placed inside the unit square so that area(mbr) == query_size.
///
/// Vertices sit at sorted uniform angles around a center with radii uniform
/// in [1/3, 1]; angle sets with a gap of pi or more are redrawn because the
/// center would fall outside the star. The mean fill ratio area(A)/area(mbr)
/// of this construction is about 0.53.
inline Polygon random_query_polygon(std::uint64_t seed, double query_size) {
  if (!(query_size > 0.0 && query_size <= 1.0)) {
    throw geometry_error("query_size must lie in (0, 1]");
  }
  Rng rng(seed);
  constexpr std::size_t m = kQueryPolygonVertices;
  constexpr double two_pi = 2.0 * std::numbers::pi;

  std::array<double, m> angles{};
  for (;;) {
    for (double& a : angles) a = rng.uniform(0.0, two_pi);
    std::sort(angles.begin(), angles.end());
    double widest = angles.front() + two_pi - angles.back();
    for (std::size_t i = 1; i < m; ++i) widest = std::max(widest, angles[i] - angles[i - 1]);
    if (widest < std::numbers::pi) break;
  }
  const Vec2 center{rng.uniform(), rng.uniform()};

  std::vector<Vec2> verts(m);
  Rect box = Rect::inverted();
  for (std::size_t i = 0; i < m; ++i) {
    const double r = rng.uniform(kQueryPolygonMinRadius, 1.0);
    verts[i] = {center.x + r * std::cos(angles[i]), center.y + r * std::sin(angles[i])};
    box.expand(verts[i]);
  }

  // Uniform scale to hit the target MBR area; if one side would exceed the
  // domain, pin it to the full side and stretch the other instead.
  const double w = box.width(), h = box.height();
  double sx = std::sqrt(query_size / (w * h));
  double sy = sx;
  if (sx * w > 1.0) {
    sx = 1.0 / w;
    sy = query_size / h;
  } else if (sy * h > 1.0) {
    sy = 1.0 / h;
    sx = query_size / w;
  }
  const double ox = rng.uniform() * std::max(0.0, 1.0 - w * sx);
  const double oy = rng.uniform() * std::max(0.0, 1.0 - h * sy);
  for (Vec2& v : verts) {
    v = {std::min(1.0, (v.x - box.min_x) * sx + ox), std::min(1.0, (v.y - box.min_y) * sy + oy)};
  }
  return Polygon(std::move(verts));
}

/// Parses `x1 y1 x2 y2 ...` (whitespace separated decimals).
inline Polygon parse_polygon(std::string_view line) {
  std::istringstream in{std::string(line)};
  std::vector<Vec2> verts;
  double x, y;
  while (in >> x) {
    if (!(in >> y)) throw geometry_error("polygon line has an odd number of coordinates");
    verts.push_back({x, y});
  }
  if (!in.eof()) throw geometry_error("polygon line contains a non-numeric token");
  return Polygon(std::move(verts));
}

inline std::string format_polygon(const Polygon& area) {
  std::string out;
  char buf[64];
  for (Vec2 v : area.vertices()) {
    std::snprintf(buf, sizeof buf, "%s%.17g %.17g", out.empty() ? "" : " ", v.x, v.y);
    out += buf;
  }
  return out;
}

}  // namespace vaq
