#pragma once

// Delaunay triangulation of a planar point set and the Voronoi-neighbor
// relation it encodes (two generators are Voronoi neighbors exactly when they
// share a Delaunay edge).
//
// Construction is incremental Bowyer-Watson. The unbounded outside is
// represented by "ghost" triangles that join each convex-hull edge to one
// symbolic vertex at infinity, which plays the role of the super-triangle
// without any finite coordinates that could end up inside a circumcircle.
// Insertion order is biased-randomized: a fixed-seed shuffle split into
// rounds of doubling size, each round sorted along a Hilbert curve so the
// point-location walk stays short.

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <numeric>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vaq/geometry.hpp"
#include "vaq/polygon.hpp"
#include "vaq/predicates.hpp"
#include "vaq/random.hpp"

namespace vaq {

using Triangle = std::array<PointId, 3>;

/// Delaunay triangulation with CSR adjacency. Immutable once built.
class Triangulation {
public:
  Triangulation() = default;

  /// Wraps an externally supplied triangle list (counter-clockwise triples of
  /// point ids) and derives adjacency from it. No Delaunay check is made;
  /// use validate() for that.
  static Triangulation from_triangles(std::vector<Point> points, std::vector<Triangle> triangles) {
    Triangulation t;
    t.points_ = std::move(points);
    t.triangles_ = std::move(triangles);
    t.derive_adjacency();
    return t;
  }

  std::size_t size() const noexcept { return points_.size(); }
  std::span<const Point> points() const noexcept { return points_; }
  std::span<const Triangle> triangles() const noexcept { return triangles_; }

  /// Delaunay-adjacent ids of `id`, ascending.
  std::span<const PointId> neighbors(PointId id) const {
    if (id >= points_.size()) throw lookup_error("unknown point id " + std::to_string(id));
    return {adjacency_.data() + offsets_[id], adjacency_.data() + offsets_[id + 1]};
  }

  std::size_t edge_count() const noexcept { return adjacency_.size() / 2; }

  /// Undirected edges (lo, hi), ascending.
  std::vector<std::pair<PointId, PointId>> edges() const {
    std::vector<std::pair<PointId, PointId>> out;
    out.reserve(edge_count());
    for (PointId u = 0; u < points_.size(); ++u) {
      for (PointId v : neighbors(u)) {
        if (u < v) out.emplace_back(u, v);
      }
    }
    return out;
  }

  /// Debug dump: one `id1 id2` line per edge, ascending.
  void write_edges(std::ostream& out) const {
    for (auto [u, v] : edges()) out << u << ' ' << v << '\n';
  }

private:
  void derive_adjacency() {
    const std::size_t n = points_.size();
    std::vector<std::pair<PointId, PointId>> half;
    half.reserve(triangles_.size() * 6);
    for (const Triangle& t : triangles_) {
      for (int i = 0; i < 3; ++i) {
        const PointId a = t[i], b = t[(i + 1) % 3];
        half.emplace_back(a, b);
        half.emplace_back(b, a);
      }
    }
    std::sort(half.begin(), half.end());
    half.erase(std::unique(half.begin(), half.end()), half.end());
    offsets_.assign(n + 1, 0);
    for (auto [a, b] : half) ++offsets_[a + 1];
    std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
    adjacency_.resize(half.size());
    for (std::size_t i = 0; i < half.size(); ++i) adjacency_[i] = half[i].second;
  }

  std::vector<Point> points_;
  std::vector<Triangle> triangles_;
  std::vector<std::uint32_t> offsets_;
  std::vector<PointId> adjacency_;
};

/// Voronoi neighbors of `id`: its Delaunay-adjacent generators, ascending.
inline std::span<const PointId> voronoi_neighbors(const Triangulation& t, PointId id) {
  return t.neighbors(id);
}

namespace detail {

// Hilbert index of (x, y) on a 2^16 x 2^16 grid.
inline std::uint64_t hilbert_index(std::uint32_t x, std::uint32_t y) {
  constexpr std::uint32_t side = 1u << 16;
  std::uint64_t d = 0;
  for (std::uint32_t s = side / 2; s > 0; s /= 2) {
    const std::uint32_t rx = (x & s) ? 1 : 0;
    const std::uint32_t ry = (y & s) ? 1 : 0;
    d += static_cast<std::uint64_t>(s) * s * ((3 * rx) ^ ry);
    if (ry == 0) {
      if (rx == 1) {
        x = side - 1 - x;
        y = side - 1 - y;
      }
      std::swap(x, y);
    }
  }
  return d;
}

class DelaunayBuilder {
public:
  static constexpr std::uint64_t kOrderSeed = 0x6a09e667f3bcc909ULL;

  explicit DelaunayBuilder(std::span<const Point> points) : pts_(points) {}

  std::vector<Triangle> run() {
    check_input();
    std::vector<PointId> order = insertion_order();
    seed_triangle(order);
    for (std::size_t i = 3; i < order.size(); ++i) insert(order[i]);

    std::vector<Triangle> out;
    out.reserve(2 * pts_.size());
    for (std::size_t t = 0; t < tris_.size(); ++t) {
      const Tri& tri = tris_[t];
      if (tri.v[0] == kDead || is_ghost(tri)) continue;
      // Canonical rotation: smallest id first.
      const int k = static_cast<int>(std::min_element(tri.v.begin(), tri.v.end()) - tri.v.begin());
      out.push_back({tri.v[k], tri.v[(k + 1) % 3], tri.v[(k + 2) % 3]});
    }
    std::sort(out.begin(), out.end());
    return out;
  }

private:
  static constexpr PointId kInf = std::numeric_limits<PointId>::max() - 1;
  static constexpr PointId kDead = std::numeric_limits<PointId>::max();
  static constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

  struct Tri {
    std::array<PointId, 3> v;
    std::array<std::uint32_t, 3> n;  // n[i] lies across the edge opposite v[i]
  };

  struct BoundaryEdge {
    PointId a, b;
    std::uint32_t outside;
  };

  static bool is_ghost(const Tri& t) noexcept {
    return t.v[0] == kInf || t.v[1] == kInf || t.v[2] == kInf;
  }

  Vec2 at(PointId id) const noexcept { return pts_[id].pos(); }

  void check_input() const {
    const std::size_t n = pts_.size();
    if (n < 3) throw construction_error("delaunay: need at least 3 points, got " + std::to_string(n));
    if (n >= kInf) throw construction_error("delaunay: too many points");
    for (std::size_t i = 0; i < n; ++i) {
      if (pts_[i].id != i) {
        throw construction_error("delaunay: point ids must be dense ordinals; position " +
                                 std::to_string(i) + " has id " + std::to_string(pts_[i].id));
      }
      if (!is_finite(pts_[i].pos())) {
        throw construction_error("delaunay: point " + std::to_string(i) + " is not finite");
      }
    }
    std::vector<PointId> by_coord(n);
    std::iota(by_coord.begin(), by_coord.end(), PointId{0});
    std::sort(by_coord.begin(), by_coord.end(), [&](PointId a, PointId b) {
      return std::pair(pts_[a].x, pts_[a].y) < std::pair(pts_[b].x, pts_[b].y);
    });
    for (std::size_t i = 1; i < n; ++i) {
      if (pts_[by_coord[i]].pos() == pts_[by_coord[i - 1]].pos()) {
        const auto [lo, hi] = std::minmax(by_coord[i - 1], by_coord[i]);
        throw construction_error("delaunay: duplicate points " + std::to_string(lo) + " and " +
                                 std::to_string(hi));
      }
    }
  }

  std::vector<PointId> insertion_order() const {
    const std::size_t n = pts_.size();
    std::vector<PointId> order(n);
    std::iota(order.begin(), order.end(), PointId{0});
    Rng rng(kOrderSeed);
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);

    Rect box = Rect::inverted();
    for (const Point& p : pts_) box.expand(p.pos());
    const double sx = box.width() > 0 ? 65535.0 / box.width() : 0.0;
    const double sy = box.height() > 0 ? 65535.0 / box.height() : 0.0;
    auto key = [&](PointId id) {
      const auto gx = static_cast<std::uint32_t>((pts_[id].x - box.min_x) * sx);
      const auto gy = static_cast<std::uint32_t>((pts_[id].y - box.min_y) * sy);
      return hilbert_index(gx, gy);
    };

    // Rounds [0, r0), [r0, r1), ... with each round about as large as all
    // earlier ones combined.
    std::vector<std::pair<std::size_t, std::size_t>> rounds;
    for (std::size_t end = n; end > 0;) {
      const std::size_t begin = end > 64 ? end / 2 : 0;
      rounds.emplace_back(begin, end);
      end = begin;
    }
    std::vector<std::pair<std::uint64_t, PointId>> keyed;
    for (auto [begin, end] : rounds) {
      keyed.clear();
      for (std::size_t i = begin; i < end; ++i) keyed.emplace_back(key(order[i]), order[i]);
      std::sort(keyed.begin(), keyed.end());
      for (std::size_t i = begin; i < end; ++i) order[i] = keyed[i - begin].second;
    }
    return order;
  }

  void seed_triangle(std::vector<PointId>& order) {
    std::size_t third = 2;
    while (third < order.size() && orient(at(order[0]), at(order[1]), at(order[third])) == 0) {
      ++third;
    }
    if (third == order.size()) throw construction_error("delaunay: all points are collinear");
    std::rotate(order.begin() + 2, order.begin() + static_cast<std::ptrdiff_t>(third),
                order.begin() + static_cast<std::ptrdiff_t>(third) + 1);

    PointId a = order[0], b = order[1], c = order[2];
    if (orient(at(a), at(b), at(c)) < 0) std::swap(b, c);
    tris_.reserve(2 * pts_.size() + 8);
    tris_.push_back({{a, b, c}, {2, 3, 1}});
    tris_.push_back({{b, a, kInf}, {kNone, kNone, 0}});
    tris_.push_back({{c, b, kInf}, {kNone, kNone, 0}});
    tris_.push_back({{a, c, kInf}, {kNone, kNone, 0}});
    // Ghost (u, w, inf): n[0] is across (w, inf), n[1] across (inf, u).
    tris_[1].n = {3, 2, 0};
    tris_[2].n = {1, 3, 0};
    tris_[3].n = {2, 1, 0};
    visit_.assign(tris_.size(), 0);
    last_ = 0;
  }

  bool in_conflict(std::uint32_t t, PointId p) const {
    const Tri& tri = tris_[t];
    const Vec2 q = at(p);
    for (int k = 0; k < 3; ++k) {
      if (tri.v[k] != kInf) continue;
      const Vec2 u = at(tri.v[(k + 1) % 3]);
      const Vec2 w = at(tri.v[(k + 2) % 3]);
      const int o = orient(u, w, q);
      return o > 0 || (o == 0 && within_box(u, w, q));
    }
    return in_circle_perturbed(at(tri.v[0]), at(tri.v[1]), at(tri.v[2]), q, tri.v[0], tri.v[1],
                               tri.v[2], p) > 0;
  }

  // Visibility walk from the most recent solid triangle. Returns a triangle
  // in conflict with p: the solid triangle containing it, or a ghost whose
  // hull edge p sees from outside.
  std::uint32_t locate(PointId p) const {
    const Vec2 q = at(p);
    std::uint32_t t = last_;
    std::uint32_t from = kNone;
    for (std::size_t steps = 0; steps < 4 * tris_.size() + 16; ++steps) {
      const Tri& tri = tris_[t];
      if (is_ghost(tri)) return t;
      std::uint32_t next = kNone;
      for (int e = 0; e < 3; ++e) {
        if (tri.n[e] == from) continue;
        if (orient(at(tri.v[(e + 1) % 3]), at(tri.v[(e + 2) % 3]), q) < 0) {
          next = tri.n[e];
          break;
        }
      }
      // p is never strictly outside the edge we arrived through.
      if (next == kNone) return t;
      from = t;
      t = next;
    }
    // Unreachable for a Delaunay triangulation; fall back to a scan.
    for (std::uint32_t i = 0; i < tris_.size(); ++i) {
      if (tris_[i].v[0] != kDead && in_conflict(i, p)) return i;
    }
    throw construction_error("delaunay: point location failed");
  }

  std::uint32_t allocate(const Tri& tri) {
    if (!free_.empty()) {
      const std::uint32_t t = free_.back();
      free_.pop_back();
      tris_[t] = tri;
      return t;
    }
    tris_.push_back(tri);
    visit_.push_back(0);
    return static_cast<std::uint32_t>(tris_.size() - 1);
  }

  void insert(PointId p) {
    const std::uint32_t start = locate(p);
    stamp_ += 2;
    const std::uint32_t in = stamp_, out = stamp_ + 1;

    cavity_.clear();
    boundary_.clear();
    cavity_.push_back(start);
    visit_[start] = in;
    for (std::size_t i = 0; i < cavity_.size(); ++i) {
      const std::uint32_t t = cavity_[i];
      for (int e = 0; e < 3; ++e) {
        const std::uint32_t nb = tris_[t].n[e];
        if (visit_[nb] == in) continue;
        if (visit_[nb] != out) {
          if (in_conflict(nb, p)) {
            visit_[nb] = in;
            cavity_.push_back(nb);
            continue;
          }
          visit_[nb] = out;
        }
        boundary_.push_back({tris_[t].v[(e + 1) % 3], tris_[t].v[(e + 2) % 3], nb});
      }
    }

    for (std::uint32_t t : cavity_) {
      tris_[t].v = {kDead, kDead, kDead};
      free_.push_back(t);
    }

    created_.clear();
    for (const BoundaryEdge& be : boundary_) {
      const std::uint32_t t = allocate({{be.a, be.b, p}, {kNone, kNone, be.outside}});
      created_.push_back(t);
      Tri& outside = tris_[be.outside];
      for (int k = 0; k < 3; ++k) {
        if (outside.v[k] != be.a && outside.v[k] != be.b) outside.n[k] = t;
      }
    }
    // New triangle (a, b, p): across (b, p) is the one starting at b, across
    // (p, a) is the one ending at a.
    for (std::uint32_t t : created_) {
      Tri& tri = tris_[t];
      for (std::uint32_t s : created_) {
        if (tris_[s].v[0] == tri.v[1]) tri.n[0] = s;
        if (tris_[s].v[1] == tri.v[0]) tri.n[1] = s;
      }
      if (!is_ghost(tri)) last_ = t;
    }
  }

  std::span<const Point> pts_;
  std::vector<Tri> tris_;
  std::vector<std::uint32_t> free_;
  std::vector<std::uint32_t> visit_;
  std::vector<std::uint32_t> cavity_;
  std::vector<BoundaryEdge> boundary_;
  std::vector<std::uint32_t> created_;
  std::uint32_t stamp_ = 0;
  std::uint32_t last_ = 0;
};

}  // namespace detail

/// Delaunay triangulation of `points`. Ids must be the dense ordinals
/// 0..n-1 in order. Throws construction_error for fewer than 3 points,
/// duplicates or an all-collinear set. Cocircular ties are broken by
/// symbolic perturbation, so the result is unique and independent of the
/// internal insertion order.
inline Triangulation build_triangulation(std::span<const Point> points) {
  detail::DelaunayBuilder builder(points);
  std::vector<Triangle> tris = builder.run();
  return Triangulation::from_triangles(std::vector<Point>(points.begin(), points.end()),
                                       std::move(tris));
}

// ---------------------------------------------------------------------------
// Validation

/// Number of input points on the convex-hull boundary, collinear boundary
/// points included.
inline std::size_t hull_boundary_count(std::span<const Point> points) {
  std::vector<Vec2> sorted;
  sorted.reserve(points.size());
  for (const Point& p : points) sorted.push_back(p.pos());
  std::sort(sorted.begin(), sorted.end(),
            [](Vec2 a, Vec2 b) { return std::pair(a.x, a.y) < std::pair(b.x, b.y); });
  if (sorted.size() < 3) return sorted.size();

  // Strict hull by monotone chain.
  std::vector<Vec2> hull(2 * sorted.size());
  std::size_t k = 0;
  for (Vec2 p : sorted) {
    while (k >= 2 && orient(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = sorted.size() - 1, lower = k + 1; i-- > 0;) {
    const Vec2 p = sorted[i];
    while (k >= lower && orient(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  hull.resize(k - 1);

  std::size_t count = 0;
  for (Vec2 p : sorted) {
    for (std::size_t i = 0; i < hull.size(); ++i) {
      const Vec2 a = hull[i], b = hull[(i + 1) % hull.size()];
      if (orient(a, b, p) == 0 && detail::within_box(a, b, p)) {
        ++count;
        break;
      }
    }
  }
  return count;
}

struct ValidationReport {
  bool counter_clockwise = true;
  bool empty_circumcircle = true;
  bool symmetric = true;
  bool connected = true;
  bool euler = true;
  std::size_t hull_size = 0;
  std::size_t triangle_count = 0;
  std::vector<std::string> failures;

  bool ok() const noexcept {
    return counter_clockwise && empty_circumcircle && symmetric && connected && euler;
  }
};

enum class CircumcircleCheck {
  local,       ///< each interior edge against the apex across it
  exhaustive,  ///< every triangle against every point, O(n * triangles)
};

/// Checks the Delaunay invariants of `t`: counter-clockwise triangles, the
/// empty-circumcircle property under the perturbed tie-breaking, symmetric
/// adjacency, a connected edge graph, and #triangles == 2n - 2 - h.
inline ValidationReport validate(const Triangulation& t,
                                 CircumcircleCheck mode = CircumcircleCheck::local) {
  ValidationReport r;
  const auto pts = t.points();
  const auto tris = t.triangles();
  const std::size_t n = pts.size();
  r.triangle_count = tris.size();
  auto fail = [&r](bool& flag, std::string msg) {
    flag = false;
    if (r.failures.size() < 32) r.failures.push_back(std::move(msg));
  };
  auto name = [](const Triangle& tri) {
    return "(" + std::to_string(tri[0]) + "," + std::to_string(tri[1]) + "," +
           std::to_string(tri[2]) + ")";
  };

  for (const Triangle& tri : tris) {
    if (orient(pts[tri[0]].pos(), pts[tri[1]].pos(), pts[tri[2]].pos()) <= 0) {
      fail(r.counter_clockwise, "triangle " + name(tri) + " is not counter-clockwise");
    }
  }

  auto in_circle_of = [&](const Triangle& tri, PointId d) {
    return in_circle_perturbed(pts[tri[0]].pos(), pts[tri[1]].pos(), pts[tri[2]].pos(),
                               pts[d].pos(), tri[0], tri[1], tri[2], d);
  };

  if (mode == CircumcircleCheck::exhaustive) {
    for (const Triangle& tri : tris) {
      if (!r.counter_clockwise) break;
      for (PointId d = 0; d < n; ++d) {
        if (d == tri[0] || d == tri[1] || d == tri[2]) continue;
        if (in_circle_of(tri, d) > 0) {
          fail(r.empty_circumcircle,
               "point " + std::to_string(d) + " lies inside circumcircle of " + name(tri));
        }
      }
    }
  } else {
    struct Side {
      PointId lo, hi, apex;
      std::uint32_t tri;
    };
    std::vector<Side> sides;
    sides.reserve(3 * tris.size());
    for (std::uint32_t i = 0; i < tris.size(); ++i) {
      for (int k = 0; k < 3; ++k) {
        const auto [lo, hi] = std::minmax(tris[i][(k + 1) % 3], tris[i][(k + 2) % 3]);
        sides.push_back({lo, hi, tris[i][k], i});
      }
    }
    std::sort(sides.begin(), sides.end(),
              [](const Side& a, const Side& b) { return std::pair(a.lo, a.hi) < std::pair(b.lo, b.hi); });
    for (std::size_t i = 0; i < sides.size();) {
      std::size_t j = i;
      while (j < sides.size() && sides[j].lo == sides[i].lo && sides[j].hi == sides[i].hi) ++j;
      if (j - i > 2) {
        fail(r.empty_circumcircle, "edge " + std::to_string(sides[i].lo) + "-" +
                                       std::to_string(sides[i].hi) + " is shared by more than two triangles");
      } else if (j - i == 2 && r.counter_clockwise) {
        if (in_circle_of(tris[sides[i].tri], sides[i + 1].apex) > 0 ||
            in_circle_of(tris[sides[i + 1].tri], sides[i].apex) > 0) {
          fail(r.empty_circumcircle, "edge " + std::to_string(sides[i].lo) + "-" +
                                         std::to_string(sides[i].hi) + " is not locally Delaunay");
        }
      }
      i = j;
    }
  }

  for (PointId u = 0; u < n; ++u) {
    for (PointId v : t.neighbors(u)) {
      const auto back = t.neighbors(v);
      if (!std::binary_search(back.begin(), back.end(), u)) {
        fail(r.symmetric, std::to_string(v) + " is a neighbor of " + std::to_string(u) +
                              " but not the reverse");
      }
    }
  }

  if (n > 0) {
    std::vector<char> seen(n, 0);
    std::vector<PointId> stack{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
      const PointId u = stack.back();
      stack.pop_back();
      for (PointId v : t.neighbors(u)) {
        if (!seen[v]) {
          seen[v] = 1;
          ++reached;
          stack.push_back(v);
        }
      }
    }
    if (reached != n) {
      fail(r.connected, "edge graph reaches " + std::to_string(reached) + " of " +
                            std::to_string(n) + " points");
    }
  }

  r.hull_size = hull_boundary_count(pts);
  const std::size_t expected = n >= 3 ? 2 * n - 2 - r.hull_size : 0;
  if (tris.size() != expected) {
    fail(r.euler, "triangle count " + std::to_string(tris.size()) + " != 2n-2-h = " +
                      std::to_string(expected));
  }
  return r;
}

}  // namespace vaq
