#pragma once

// Area queries over a point dataset: the R-tree filter-refine baseline and
// the Voronoi-neighbor traversal that grows its candidate set outward from a
// seed point and stops at the query boundary.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "vaq/delaunay.hpp"
#include "vaq/geometry.hpp"
#include "vaq/polygon.hpp"
#include "vaq/rtree.hpp"

namespace vaq {

struct QueryOutcome {
  std::vector<PointId> result_ids;     // ascending
  std::vector<PointId> candidate_ids;  // in the order they were tested
  std::size_t candidate_count = 0;
  std::size_t containment_tests = 0;
  std::size_t intersection_tests = 0;
  std::chrono::nanoseconds elapsed{0};
};

/// Delaunay adjacency re-laid in Hilbert order. Slots near each other in
/// memory are near each other in the plane, so a traversal that spreads out
/// from a seed touches few cache lines. Position, adjacency offset and id
/// share one record so a visit reads one line instead of three.
struct TraversalGraph {
  struct Node {
    Vec2 pos;
    std::uint32_t first;  // neighbors are adjacency[first, next node's first)
    PointId id;
  };
  std::vector<Node> nodes;  // one per slot plus a sentinel
  std::vector<std::uint32_t> adjacency;
  std::vector<std::uint32_t> slot_of;

  std::size_t size() const noexcept { return nodes.empty() ? 0 : nodes.size() - 1; }

  static TraversalGraph build(const std::vector<Point>& points, const Triangulation& t) {
    TraversalGraph g;
    const std::size_t n = points.size();
    // Two high bits of a slot are borrowed by the traversal queue.
    if (n >= (std::size_t{1} << 30)) throw construction_error("traversal graph: too many points");
    Rect box = Rect::of(points.front().pos());
    for (const Point& p : points) box.expand(p.pos());
    const double sx = box.max_x > box.min_x ? 65535.0 / (box.max_x - box.min_x) : 0.0;
    const double sy = box.max_y > box.min_y ? 65535.0 / (box.max_y - box.min_y) : 0.0;
    std::vector<std::pair<std::uint64_t, PointId>> keyed(n);
    for (const Point& p : points) {
      const auto hx = static_cast<std::uint32_t>((p.x - box.min_x) * sx);
      const auto hy = static_cast<std::uint32_t>((p.y - box.min_y) * sy);
      keyed[p.id] = {detail::hilbert_index(hx, hy), p.id};
    }
    std::sort(keyed.begin(), keyed.end());

    g.slot_of.resize(n);
    for (std::size_t s = 0; s < n; ++s) g.slot_of[keyed[s].second] = static_cast<std::uint32_t>(s);
    g.nodes.resize(n + 1);
    g.adjacency.reserve(2 * t.edge_count());
    for (std::size_t s = 0; s < n; ++s) {
      const PointId id = keyed[s].second;
      g.nodes[s] = {points[id].pos(), static_cast<std::uint32_t>(g.adjacency.size()), id};
      for (PointId nb : t.neighbors(id)) g.adjacency.push_back(g.slot_of[nb]);
    }
    g.nodes[n] = {{}, static_cast<std::uint32_t>(g.adjacency.size()), 0};
    return g;
  }
};

/// The three views of one point set. All of them index the same points,
/// whose ids are the ordinals 0..n-1.
struct Dataset {
  std::vector<Point> points;
  RTree rtree;
  Triangulation triangulation;
  TraversalGraph graph;
  std::chrono::nanoseconds rtree_build{0};
  std::chrono::nanoseconds triangulation_build{0};

  static Dataset build(std::vector<Point> points, std::size_t fanout = RTree::kDefaultFanout) {
    using clock = std::chrono::steady_clock;
    Dataset d;
    d.points = std::move(points);
    auto t0 = clock::now();
    d.rtree = RTree::bulk_load(d.points, fanout);
    auto t1 = clock::now();
    d.triangulation = build_triangulation(d.points);
    d.graph = TraversalGraph::build(d.points, d.triangulation);
    auto t2 = clock::now();
    d.rtree_build = t1 - t0;
    d.triangulation_build = t2 - t1;
    return d;
  }

  std::size_t size() const noexcept { return points.size(); }
};

/// Why a point entered the Voronoi traversal's candidate queue.
enum class EnqueueRule : std::uint8_t {
  seed,      ///< nearest point to the interior probe
  internal,  ///< neighbor of a point inside the area
  crossing,  ///< neighbor of an outside point, joined by a segment touching the area
};

struct TraceEntry {
  PointId id;
  PointId parent;  // == id for the seed
  EnqueueRule rule;
  bool contained;  // outcome of the containment test when dequeued
};

/// Optional record of a Voronoi traversal, in enqueue order.
struct Trace {
  Vec2 probe{};
  std::vector<TraceEntry> entries;
};

/// Filter-refine baseline: window query on the area's MBR, then exact
/// containment on every candidate.
inline QueryOutcome filter_refine_query(const Dataset& data, const Polygon& area) {
  QueryOutcome out;
  const auto start = std::chrono::steady_clock::now();
  data.rtree.visit_window(mbr(area), [&](const Point& p) {
    out.candidate_ids.push_back(p.id);
    ++out.containment_tests;
    if (point_in_polygon(p.pos(), area)) out.result_ids.push_back(p.id);
  });
  out.elapsed = std::chrono::steady_clock::now() - start;
  out.candidate_count = out.candidate_ids.size();
  std::sort(out.result_ids.begin(), out.result_ids.end());
  return out;
}

namespace detail {

// Per-thread buffers reused across traversals so a query costs time in
// proportion to what it visits, not to n. Only the bitmap words of enqueued
// points are dirtied, and those are cleared again on exit.
struct TraversalScratch {
  std::vector<std::uint64_t> visited;
  std::vector<std::uint32_t> queue;  // FIFO of slot | containment tag

  void prepare(std::size_t n) {
    if (visited.size() < (n + 63) / 64) visited.assign((n + 63) / 64, 0);
    if (queue.size() < 1024) grow(1024);
  }
  void grow(std::size_t need) { queue.resize(std::max(need, 2 * queue.size())); }
};

// Queue entries carry the containment outcome when the crossing rule has
// already computed it, so the point is not tested twice.
inline constexpr std::uint32_t kKnownInside = 1u << 31;
inline constexpr std::uint32_t kKnownOutside = 1u << 30;
inline constexpr std::uint32_t kSlotMask = kKnownOutside - 1;

inline TraversalScratch& traversal_scratch() {
  thread_local TraversalScratch scratch;
  return scratch;
}

struct ScratchReset {
  TraversalScratch& scratch;
  std::size_t used = 0;
  ~ScratchReset() {
    // On an early exit `used` is stale, so fall back to a full wipe.
    if (used == 0) {
      std::fill(scratch.visited.begin(), scratch.visited.end(), 0);
      return;
    }
    for (std::size_t i = 0; i < used; ++i) scratch.visited[(scratch.queue[i] & kSlotMask) >> 6] = 0;
  }
};

// Returns the moment the traversal finished, before the id copy-out.
template <bool Traced>
std::chrono::steady_clock::time_point voronoi_traverse(const Dataset& data, const Polygon& area,
                                                       QueryOutcome& out, Trace* trace) {
  // Works on graph slots throughout; ids come back through the node records.
  const TraversalGraph& g = data.graph;
  const TraversalGraph::Node* const nodes = g.nodes.data();
  const std::uint32_t* const adjacency = g.adjacency.data();

  TraversalScratch& scratch = traversal_scratch();
  scratch.prepare(g.size());
  ScratchReset reset{scratch};
  std::uint64_t* const visited = scratch.visited.data();
  std::uint32_t* queue = scratch.queue.data();
  std::size_t head = 0, tail = 0;

  const Vec2 probe = interior_point(area);
  const PointId seed_id = data.rtree.nearest_neighbor(probe);
  const std::uint32_t seed = g.slot_of[seed_id];
  visited[seed >> 6] |= std::uint64_t{1} << (seed & 63);
  queue[tail++] = seed;
  if constexpr (Traced) {
    trace->probe = probe;
    trace->entries.clear();
    trace->entries.push_back({seed_id, seed_id, EnqueueRule::seed, false});
  }

  std::size_t tests = 0;
  while (head < tail) {
    const std::size_t slot = head++;
    const std::uint32_t entry = queue[slot];
    const std::uint32_t p = entry & kSlotMask;
    const TraversalGraph::Node& node = nodes[p];
    const Vec2 here = node.pos;
    const bool contained = (entry & kKnownInside) != 0 ||
                           ((entry & kKnownOutside) == 0 && point_in_polygon(here, area));
    if constexpr (Traced) trace->entries[slot].contained = contained;
    const std::uint32_t* const first = adjacency + node.first;
    const std::uint32_t* const last = adjacency + nodes[p + 1].first;
    // Room for every neighbor plus one spare slot for the branch-free write.
    const auto degree = static_cast<std::size_t>(last - first);
    if (tail + degree + 1 > scratch.queue.size()) {
      scratch.grow(tail + degree + 1);
      queue = scratch.queue.data();
    }
    if (contained) {
      out.result_ids.push_back(node.id);
      for (const std::uint32_t* it = first; it != last; ++it) {
        const std::uint32_t nb = *it;
        std::uint64_t& word = visited[nb >> 6];
        const std::uint64_t bit = std::uint64_t{1} << (nb & 63);
        const bool fresh = (word & bit) == 0;
        word |= bit;
        queue[tail] = nb;
        tail += fresh;
        if constexpr (Traced) {
          if (fresh) trace->entries.push_back({nodes[nb].id, node.id, EnqueueRule::internal, false});
        }
      }
    } else {
      for (const std::uint32_t* it = first; it != last; ++it) {
        const std::uint32_t nb = *it;
        std::uint64_t& word = visited[nb >> 6];
        const std::uint64_t bit = std::uint64_t{1} << (nb & 63);
        if (word & bit) continue;
        ++tests;
        // p is outside, so the segment meets the area iff nb is inside or
        // the segment touches the boundary.
        const Vec2 there = nodes[nb].pos;
        std::uint32_t tag = 0;
        if (point_in_polygon(there, area)) {
          tag = kKnownInside;
        } else if (segment_touches_boundary(here, there, area)) {
          tag = kKnownOutside;
        }
        if (tag != 0) {
          word |= bit;
          queue[tail++] = nb | tag;
          if constexpr (Traced) {
            trace->entries.push_back({nodes[nb].id, node.id, EnqueueRule::crossing, false});
          }
        }
      }
    }
  }
  const auto done = std::chrono::steady_clock::now();
  out.candidate_count = tail;
  out.containment_tests = tail;
  out.intersection_tests = tests;
  out.candidate_ids.resize(tail);
  for (std::size_t i = 0; i < tail; ++i) out.candidate_ids[i] = nodes[queue[i] & kSlotMask].id;
  reset.used = tail;
  return done;
}

}  // namespace detail

/// Voronoi-neighbor traversal.
///
/// Seeds a FIFO queue with the stored point nearest to an interior point of
/// the area. A dequeued point inside the area joins the result and enqueues
/// every unvisited neighbor; a point outside enqueues only those unvisited
/// neighbors whose connecting segment touches the area. A point is enqueued
/// at most once, so the loop ends after at most n iterations.
inline QueryOutcome voronoi_area_query(const Dataset& data, const Polygon& area,
                                       Trace* trace = nullptr) {
  if (data.points.empty()) throw query_error("voronoi_area_query: empty dataset");
  QueryOutcome out;
  const auto start = std::chrono::steady_clock::now();
  const auto done = trace ? detail::voronoi_traverse<true>(data, area, out, trace)
                          : detail::voronoi_traverse<false>(data, area, out, nullptr);
  out.elapsed = done - start;
  std::sort(out.result_ids.begin(), out.result_ids.end());
  return out;
}

/// Linear scan with the same containment predicate; the correctness oracle.
inline std::vector<PointId> brute_force_query(const Dataset& data, const Polygon& area) {
  std::vector<PointId> out;
  for (const Point& p : data.points) {
    if (point_in_polygon(p.pos(), area)) out.push_back(p.id);
  }
  return out;
}

}  // namespace vaq
