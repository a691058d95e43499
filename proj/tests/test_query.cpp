#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "oracles.hpp"
#include "vaq/vaq.hpp"

using vaq::Dataset;
using vaq::Point;
using vaq::PointId;
using vaq::Polygon;

namespace {

Polygon full_domain() { return Polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }

}  // namespace

TEST(FilterRefine, FullDomain) {
  const Dataset d = Dataset::build(vaq::generate_dataset(1000, 1));
  const auto out = vaq::filter_refine_query(d, full_domain());
  std::vector<PointId> all(1000);
  std::iota(all.begin(), all.end(), PointId{0});
  EXPECT_EQ(out.result_ids, all);
  EXPECT_EQ(out.candidate_count, 1000u);
  EXPECT_EQ(vaq::brute_force_query(d, full_domain()), all);
}

TEST(FilterRefine, EmptyRegion) {
  const Dataset d = Dataset::build(vaq::generate_dataset(1000, 1));
  const Polygon far({{2, 2}, {3, 2}, {2.5, 3}});
  const auto out = vaq::filter_refine_query(d, far);
  EXPECT_TRUE(out.result_ids.empty());
  EXPECT_EQ(out.candidate_count, 0u);
  EXPECT_TRUE(vaq::brute_force_query(d, far).empty());
}

TEST(FilterRefine, MatchesScansOnRandomPolygon) {
  const Dataset d = Dataset::build(vaq::generate_dataset(1000, 2));
  for (std::uint64_t s = 0; s < 30; ++s) {
    const Polygon a = vaq::random_query_polygon(s, 0.1);
    const auto out = vaq::filter_refine_query(d, a);
    std::vector<PointId> expected;
    for (const Point& p : d.points) {
      if (oracle::inside_by_angle_sum(p.pos(), {a.vertices().begin(), a.vertices().end()})) {
        expected.push_back(p.id);
      }
    }
    EXPECT_EQ(out.result_ids, expected);
    EXPECT_EQ(out.candidate_count, oracle::scan_window(d.points, vaq::mbr(a)).size());
    EXPECT_EQ(out.containment_tests, out.candidate_count);
  }
}

TEST(VoronoiQuery, FullDomain) {
  const Dataset d = Dataset::build(vaq::generate_dataset(1000, 3));
  const auto out = vaq::voronoi_area_query(d, full_domain());
  EXPECT_EQ(out.result_ids.size(), 1000u);
  EXPECT_EQ(out.candidate_count, 1000u);
}

TEST(VoronoiQuery, SinglePointInside) {
  const std::vector<Point> pts{{0.1, 0.1, 0}, {0.9, 0.1, 1}, {0.5, 0.9, 2}, {0.5, 0.4, 3}};
  const Dataset d = Dataset::build(pts);
  const Polygon a({{0.45, 0.35}, {0.55, 0.35}, {0.55, 0.45}, {0.45, 0.45}});
  const auto out = vaq::voronoi_area_query(d, a);
  EXPECT_EQ(out.result_ids, std::vector<PointId>{3});
  EXPECT_GE(out.candidate_count, 1u);
}

TEST(VoronoiQuery, EmptyAreaStopsAtSeedFrontier) {
  // A tiny polygon inside one triangle and away from every edge.
  const std::vector<Point> pts{{0, 0, 0}, {1, 0, 1}, {0.5, 1, 2}};
  const Dataset d = Dataset::build(pts);
  const Polygon a({{0.49, 0.3}, {0.51, 0.3}, {0.5, 0.32}});
  vaq::Trace trace;
  const auto out = vaq::voronoi_area_query(d, a, &trace);
  EXPECT_TRUE(out.result_ids.empty());
  EXPECT_EQ(out.candidate_count, 1u);
  EXPECT_EQ(trace.entries.size(), 1u);
  EXPECT_EQ(trace.entries[0].rule, vaq::EnqueueRule::seed);
  EXPECT_FALSE(trace.entries[0].contained);
}

TEST(VoronoiQuery, FarAwayAreaIsEmpty) {
  const Dataset d = Dataset::build(vaq::generate_dataset(500, 9));
  const Polygon far({{2, 2}, {3, 2}, {2.5, 3}});
  const auto out = vaq::voronoi_area_query(d, far);
  EXPECT_TRUE(out.result_ids.empty());
  EXPECT_EQ(out.candidate_count, 1u);
}

TEST(VoronoiQuery, TripleEquivalence) {
  const Dataset d = Dataset::build(vaq::generate_dataset(1000, 4));
  for (std::uint64_t s = 0; s < 100; ++s) {
    for (double q : {0.01, 0.05, 0.2}) {
      const Polygon a = vaq::random_query_polygon(vaq::mix_seed(s, 7), q);
      const auto voro = vaq::voronoi_area_query(d, a);
      const auto trad = vaq::filter_refine_query(d, a);
      const auto scan = vaq::brute_force_query(d, a);
      ASSERT_EQ(voro.result_ids, scan) << vaq::format_polygon(a);
      ASSERT_EQ(trad.result_ids, scan);
    }
  }
}

TEST(VoronoiQuery, ConcavePolygonsAndDegenerateGrid) {
  // Grid points sit exactly on the polygon's edges and vertices.
  std::vector<Point> pts;
  for (int i = 0; i <= 20; ++i)
    for (int j = 0; j <= 20; ++j) pts.push_back({i / 20.0, j / 20.0, static_cast<PointId>(pts.size())});
  const Dataset d = Dataset::build(pts);
  const std::vector<Polygon> areas{
      Polygon({{0.1, 0.1}, {0.9, 0.1}, {0.9, 0.9}, {0.8, 0.9}, {0.8, 0.2}, {0.2, 0.2}, {0.2, 0.9}, {0.1, 0.9}}),
      Polygon({{0.05, 0.05}, {0.95, 0.05}, {0.5, 0.5}}),
      Polygon({{0.3, 0.3}, {0.7, 0.3}, {0.7, 0.7}, {0.3, 0.7}}),
      Polygon({{0.02, 0.5}, {0.98, 0.5}, {0.98, 0.52}, {0.02, 0.52}}),
  };
  for (const Polygon& a : areas) {
    const auto scan = vaq::brute_force_query(d, a);
    EXPECT_EQ(vaq::voronoi_area_query(d, a).result_ids, scan);
    EXPECT_EQ(vaq::filter_refine_query(d, a).result_ids, scan);
  }
}

TEST(VoronoiQuery, TraceInvariants) {
  const Dataset d = Dataset::build(vaq::generate_dataset(3000, 5));
  for (std::uint64_t s = 0; s < 40; ++s) {
    const Polygon a = vaq::random_query_polygon(s, 0.03);
    vaq::Trace trace;
    const auto out = vaq::voronoi_area_query(d, a, &trace);
    ASSERT_EQ(trace.entries.size(), out.candidate_count);
    EXPECT_TRUE(vaq::point_in_polygon(trace.probe, a));

    // The seed is the stored point nearest the probe.
    EXPECT_EQ(trace.entries[0].id, oracle::scan_nearest(d.points, trace.probe));
    EXPECT_EQ(trace.entries[0].rule, vaq::EnqueueRule::seed);

    std::vector<char> enqueued(d.size(), 0), contained(d.size(), 0);
    std::size_t inside = 0;
    for (const auto& e : trace.entries) {
      ASSERT_FALSE(enqueued[e.id]) << "point enqueued twice";
      enqueued[e.id] = 1;
      EXPECT_EQ(e.contained, vaq::point_in_polygon(d.points[e.id].pos(), a));
      if (e.contained) {
        contained[e.id] = 1;
        ++inside;
      }
      if (e.rule == vaq::EnqueueRule::seed) continue;
      const auto nb = d.triangulation.neighbors(e.parent);
      EXPECT_TRUE(std::binary_search(nb.begin(), nb.end(), e.id));
      ASSERT_TRUE(enqueued[e.parent]);
      if (e.rule == vaq::EnqueueRule::internal) {
        EXPECT_TRUE(contained[e.parent]);
      } else {
        EXPECT_FALSE(contained[e.parent]);
        EXPECT_TRUE(vaq::segment_intersects_polygon(
            vaq::Segment(d.points[e.parent].pos(), d.points[e.id].pos()), a));
      }
    }
    EXPECT_EQ(inside, out.result_ids.size());
    EXPECT_EQ(out.containment_tests, out.candidate_count);
  }
}

TEST(VoronoiQuery, EmptyDatasetThrows) {
  const Dataset empty;
  EXPECT_THROW(vaq::voronoi_area_query(empty, full_domain()), vaq::query_error);
}

TEST(VoronoiQuery, FewerCandidatesThanBaselineOnAverage) {
  const Dataset d = Dataset::build(vaq::generate_dataset(50000, 8));
  double trad = 0, voro = 0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    const Polygon a = vaq::random_query_polygon(s, 0.04);
    trad += static_cast<double>(vaq::filter_refine_query(d, a).candidate_count);
    voro += static_cast<double>(vaq::voronoi_area_query(d, a).candidate_count);
  }
  EXPECT_LT(voro, trad);
}

TEST(TraversalGraph, MirrorsTriangulation) {
  const Dataset d = Dataset::build(vaq::generate_dataset(3000, 9));
  const auto& g = d.graph;
  ASSERT_EQ(g.size(), 3000u);
  ASSERT_EQ(g.nodes.back().first, g.adjacency.size());
  for (std::uint32_t s = 0; s < 3000; ++s) {
    const PointId id = g.nodes[s].id;
    ASSERT_EQ(g.slot_of[id], s);
    EXPECT_EQ(g.nodes[s].pos, d.points[id].pos());
    std::vector<PointId> mapped;
    for (std::uint32_t k = g.nodes[s].first; k < g.nodes[s + 1].first; ++k) {
      mapped.push_back(g.nodes[g.adjacency[k]].id);
    }
    std::sort(mapped.begin(), mapped.end());
    const auto nb = d.triangulation.neighbors(id);
    EXPECT_EQ(mapped, std::vector<PointId>(nb.begin(), nb.end()));
  }
}

TEST(VoronoiQuery, ScratchReuseAcrossDatasets) {
  // Alternate a large and a small dataset so leftover buffers from one
  // traversal would show up in the next.
  const Dataset big = Dataset::build(vaq::generate_dataset(20000, 10));
  const Dataset small = Dataset::build(vaq::generate_dataset(200, 11));
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Polygon a = vaq::random_query_polygon(s, 0.3);
    EXPECT_EQ(vaq::voronoi_area_query(big, a).result_ids, vaq::brute_force_query(big, a));
    EXPECT_EQ(vaq::voronoi_area_query(small, a).result_ids, vaq::brute_force_query(small, a));
    const auto full = vaq::voronoi_area_query(big, full_domain());
    EXPECT_EQ(full.result_ids.size(), 20000u);
  }
}
