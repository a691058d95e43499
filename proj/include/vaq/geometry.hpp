#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace vaq {

/// Raised when an input violates a geometric precondition (bad polygon,
/// degenerate predicate input, malformed text).
class geometry_error : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an index cannot be built from the given input.
class construction_error : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Raised for an unknown point id.
class lookup_error : public std::out_of_range {
public:
  using std::out_of_range::out_of_range;
};

/// Raised when a query cannot run (for example on an empty dataset).
class query_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Raised for unreadable or unwritable files and malformed configuration.
class io_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

using PointId = std::uint32_t;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr bool operator==(const Vec2&, const Vec2&) = default;
};

/// A stored point. Within one dataset ids are dense ordinals 0..n-1.
struct Point {
  double x = 0.0;
  double y = 0.0;
  PointId id = 0;

  constexpr Vec2 pos() const noexcept { return {x, y}; }

  friend constexpr bool operator==(const Point&, const Point&) = default;
};

inline bool is_finite(Vec2 v) noexcept { return std::isfinite(v.x) && std::isfinite(v.y); }

inline double squared_distance(Vec2 a, Vec2 b) noexcept {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

struct Segment {
  Vec2 a;
  Vec2 b;

  Segment() = default;
  Segment(Vec2 from, Vec2 to) : a(from), b(to) {
    if (a == b) throw geometry_error("segment endpoints coincide");
  }
};

/// Closed axis-aligned rectangle.
struct Rect {
  double min_x = 0.0;
  double min_y = 0.0;
  double max_x = 0.0;
  double max_y = 0.0;

  static constexpr Rect unit() noexcept { return {0.0, 0.0, 1.0, 1.0}; }

  static constexpr Rect of(Vec2 p) noexcept { return {p.x, p.y, p.x, p.y}; }

  /// Empty sentinel: expand() from here yields the bounds of the expanded set.
  static constexpr Rect inverted() noexcept {
    return {HUGE_VAL, HUGE_VAL, -HUGE_VAL, -HUGE_VAL};
  }

  constexpr bool valid() const noexcept { return min_x <= max_x && min_y <= max_y; }
  constexpr double width() const noexcept { return max_x - min_x; }
  constexpr double height() const noexcept { return max_y - min_y; }
  constexpr double area() const noexcept { return width() * height(); }

  constexpr bool contains(Vec2 p) const noexcept {
    return min_x <= p.x && p.x <= max_x && min_y <= p.y && p.y <= max_y;
  }
  constexpr bool contains(const Rect& r) const noexcept {
    return min_x <= r.min_x && r.max_x <= max_x && min_y <= r.min_y && r.max_y <= max_y;
  }
  constexpr bool intersects(const Rect& r) const noexcept {
    return min_x <= r.max_x && r.min_x <= max_x && min_y <= r.max_y && r.min_y <= max_y;
  }

  void expand(Vec2 p) noexcept {
    min_x = std::min(min_x, p.x);
    min_y = std::min(min_y, p.y);
    max_x = std::max(max_x, p.x);
    max_y = std::max(max_y, p.y);
  }
  void expand(const Rect& r) noexcept {
    min_x = std::min(min_x, r.min_x);
    min_y = std::min(min_y, r.min_y);
    max_x = std::max(max_x, r.max_x);
    max_y = std::max(max_y, r.max_y);
  }

  /// Squared distance from q to the closest point of the rectangle; 0 inside.
  double min_squared_distance(Vec2 q) const noexcept {
    const double dx = q.x < min_x ? min_x - q.x : (q.x > max_x ? q.x - max_x : 0.0);
    const double dy = q.y < min_y ? min_y - q.y : (q.y > max_y ? q.y - max_y : 0.0);
    return dx * dx + dy * dy;
  }

  friend constexpr bool operator==(const Rect&, const Rect&) = default;
};

}  // namespace vaq
