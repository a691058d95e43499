#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "vaq/vaq.hpp"

using vaq::Polygon;
using vaq::Rect;
using vaq::Vec2;

namespace {

Polygon unit_square() { return Polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }

// U shape opening upward; its vertex centroid (0.5, ~0.44) falls in the notch.
Polygon u_shape() {
  return Polygon({{0, 0}, {1, 0}, {1, 1}, {0.8, 1}, {0.8, 0.2}, {0.2, 0.2}, {0.2, 1}, {0, 1}});
}

}  // namespace

TEST(Orient, BasicTurns) {
  EXPECT_EQ(vaq::orient({0, 0}, {1, 0}, {0, 1}), 1);
  EXPECT_EQ(vaq::orient({0, 0}, {1, 1}, {2, 2}), 0);
  EXPECT_EQ(vaq::orient({0, 0}, {0, 1}, {1, 0}), -1);
}

TEST(Orient, NearlyCollinearAgreesWithRational) {
  // Points on y = x perturbed by one ulp: the naive double formula is
  // unreliable here, the exact sign is not.
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const double s = u(gen), t = u(gen), r = u(gen);
    const Vec2 a{s, s}, b{t, t};
    Vec2 c{r, r};
    const int k = static_cast<int>(gen() % 3);
    if (k == 1) c.y = std::nextafter(c.y, 2.0);
    if (k == 2) c.y = std::nextafter(c.y, -1.0);
    EXPECT_EQ(vaq::orient(a, b, c), oracle::orient_sign(a, b, c));
  }
}

TEST(Orient, Antisymmetric) {
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const Vec2 a{u(gen), u(gen)}, b{u(gen), u(gen)}, c{u(gen), u(gen)};
    EXPECT_EQ(vaq::orient(a, b, c), -vaq::orient(b, a, c));
    EXPECT_EQ(vaq::orient(a, b, c), vaq::orient(b, c, a));
  }
}

TEST(InCircle, Examples) {
  EXPECT_EQ(vaq::in_circle({0, 0}, {1, 0}, {0, 1}, {0.25, 0.25}), 1);
  EXPECT_EQ(vaq::in_circle({0, 0}, {1, 0}, {0, 1}, {1, 1}), 0);
  EXPECT_EQ(vaq::in_circle({0, 0}, {1, 0}, {0, 1}, {5, 5}), -1);
}

TEST(InCircle, CollinearTripleThrows) {
  EXPECT_THROW(vaq::in_circle({0, 0}, {1, 1}, {2, 2}, {0, 1}), vaq::geometry_error);
}

TEST(InCircle, OddPermutationFlipsSign) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const Vec2 a{u(gen), u(gen)}, b{u(gen), u(gen)}, c{u(gen), u(gen)}, d{u(gen), u(gen)};
    if (vaq::orient(a, b, c) == 0) continue;
    EXPECT_EQ(vaq::in_circle(a, b, c, d), -vaq::in_circle(b, a, c, d));
    const int expect = oracle::incircle_sign(a, b, c, d);
    EXPECT_EQ(vaq::in_circle(a, b, c, d), expect);
  }
}

TEST(InCircle, PerturbedNeverZeroAndAlternating) {
  // Eight points on the circle of radius 5 centred at the origin, all
  // with integer coordinates, so every quadruple is exactly cocircular.
  const std::array<Vec2, 8> ring{{{5, 0}, {4, 3}, {3, 4}, {0, 5}, {-3, 4}, {-5, 0}, {0, -5}, {4, -3}}};
  for (std::size_t i = 0; i < ring.size(); ++i)
    for (std::size_t j = 0; j < ring.size(); ++j)
      for (std::size_t k = 0; k < ring.size(); ++k)
        for (std::size_t l = 0; l < ring.size(); ++l) {
          if (i == j || i == k || i == l || j == k || j == l || k == l) continue;
          const Vec2 a = ring[i], b = ring[j], c = ring[k], d = ring[l];
          const auto ia = static_cast<vaq::PointId>(i), ib = static_cast<vaq::PointId>(j),
                     ic = static_cast<vaq::PointId>(k), id = static_cast<vaq::PointId>(l);
          const int s = vaq::in_circle_perturbed(a, b, c, d, ia, ib, ic, id);
          ASSERT_NE(s, 0);
          EXPECT_EQ(s, -vaq::in_circle_perturbed(b, a, c, d, ib, ia, ic, id));
          EXPECT_EQ(s, -vaq::in_circle_perturbed(a, b, d, c, ia, ib, id, ic));
          EXPECT_EQ(s, -vaq::in_circle_perturbed(d, b, c, a, id, ib, ic, ia));
        }
}

TEST(PointInPolygon, Examples) {
  const Polygon sq = unit_square();
  EXPECT_TRUE(vaq::point_in_polygon({0.5, 0.5}, sq));
  EXPECT_TRUE(vaq::point_in_polygon({1.0, 0.5}, sq));
  EXPECT_FALSE(vaq::point_in_polygon({1.5, 0.5}, sq));
}

TEST(PointInPolygon, VerticesAndEdgesAreInside) {
  const Polygon u = u_shape();
  for (Vec2 v : u.vertices()) EXPECT_TRUE(vaq::point_in_polygon(v, u));
  EXPECT_TRUE(vaq::point_in_polygon({0.5, 0.2}, u));
  EXPECT_FALSE(vaq::point_in_polygon({0.5, 0.5}, u));
  EXPECT_TRUE(vaq::point_in_polygon({0.1, 0.9}, u));
}

TEST(PointInPolygon, MatchesAngleSumOracle) {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int checked = 0;
  for (int k = 0; k < 100; ++k) {
    const Polygon area = vaq::random_query_polygon(1000 + k, 0.05 + 0.4 * u(gen));
    const std::vector<Vec2> verts(area.vertices().begin(), area.vertices().end());
    const Rect box = vaq::mbr(area);
    for (int i = 0; i < 100; ++i) {
      const Vec2 p{box.min_x - 0.1 + (box.width() + 0.2) * u(gen),
                   box.min_y - 0.1 + (box.height() + 0.2) * u(gen)};
      EXPECT_EQ(vaq::point_in_polygon(p, area), oracle::inside_by_angle_sum(p, verts))
          << p.x << " " << p.y << " in " << vaq::format_polygon(area);
      ++checked;
    }
  }
  EXPECT_EQ(checked, 10000);
}

TEST(SegmentIntersectsPolygon, Examples) {
  const Polygon sq = unit_square();
  EXPECT_TRUE(vaq::segment_intersects_polygon(vaq::Segment({-1, 0.5}, {2, 0.5}), sq));
  EXPECT_FALSE(vaq::segment_intersects_polygon(vaq::Segment({2, 2}, {3, 3}), sq));
  EXPECT_TRUE(vaq::segment_intersects_polygon(vaq::Segment({0.2, 0.2}, {0.4, 0.4}), sq));
}

TEST(SegmentIntersectsPolygon, TouchingCountsAndSpanningNotch) {
  const Polygon u = u_shape();
  // Touches only a corner.
  EXPECT_TRUE(vaq::segment_intersects_polygon(vaq::Segment({1, 1}, {2, 2}), u));
  // Crosses the notch from arm to arm with both endpoints inside.
  EXPECT_TRUE(vaq::segment_intersects_polygon(vaq::Segment({0.1, 0.5}, {0.9, 0.5}), u));
  // Lies wholly in the notch.
  EXPECT_FALSE(vaq::segment_intersects_polygon(vaq::Segment({0.3, 0.5}, {0.7, 0.9}), u));
}

TEST(SegmentIntersectsPolygon, EndpointInsideImpliesTrue) {
  std::mt19937_64 gen(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Polygon area = vaq::random_query_polygon(77, 0.3);
  for (int i = 0; i < 2000; ++i) {
    const Vec2 a{u(gen), u(gen)}, b{u(gen), u(gen)};
    if (a == b) continue;
    const bool hit = vaq::segment_intersects_polygon(vaq::Segment(a, b), area);
    if (vaq::point_in_polygon(a, area) || vaq::point_in_polygon(b, area)) {
      EXPECT_TRUE(hit);
    }
    if (!hit) {
      // Sample along the segment; no sample may be inside.
      for (int s = 0; s <= 20; ++s) {
        const double t = s / 20.0;
        EXPECT_FALSE(vaq::point_in_polygon({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)}, area));
      }
    }
  }
}

TEST(Segment, DegenerateThrows) { EXPECT_THROW(vaq::Segment({1, 1}, {1, 1}), vaq::geometry_error); }

TEST(Mbr, Examples) {
  const Rect t = vaq::mbr(Polygon({{0, 0}, {1, 0}, {0, 1}}));
  EXPECT_EQ(t.min_x, 0);
  EXPECT_EQ(t.min_y, 0);
  EXPECT_EQ(t.max_x, 1);
  EXPECT_EQ(t.max_y, 1);
  const Rect s = vaq::mbr(unit_square());
  EXPECT_EQ(s.area(), 1.0);
  const Rect p = vaq::mbr(Polygon({{0.1, 0.2}, {0.9, 0.3}, {0.8, 0.9}, {0.5, 0.95}, {0.15, 0.7}}));
  EXPECT_EQ(p.min_x, 0.1);
  EXPECT_EQ(p.min_y, 0.2);
  EXPECT_EQ(p.max_x, 0.9);
  EXPECT_EQ(p.max_y, 0.95);
}

TEST(Mbr, TightOnRandomPolygons) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Polygon a = vaq::random_query_polygon(seed, 0.02);
    const Rect r = vaq::mbr(a);
    double lo_x = 1e9, lo_y = 1e9, hi_x = -1e9, hi_y = -1e9;
    for (Vec2 v : a.vertices()) {
      lo_x = std::min(lo_x, v.x);
      lo_y = std::min(lo_y, v.y);
      hi_x = std::max(hi_x, v.x);
      hi_y = std::max(hi_y, v.y);
    }
    EXPECT_EQ(r.min_x, lo_x);
    EXPECT_EQ(r.min_y, lo_y);
    EXPECT_EQ(r.max_x, hi_x);
    EXPECT_EQ(r.max_y, hi_y);
  }
}

TEST(InteriorPoint, TriangleCentroid) {
  const Vec2 c = vaq::interior_point(Polygon({{0, 0}, {1, 0}, {0, 1}}));
  EXPECT_DOUBLE_EQ(c.x, 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(c.y, 1.0 / 3.0);
}

TEST(InteriorPoint, ConvexGivesVertexCentroid) {
  const Vec2 c = vaq::interior_point(unit_square());
  EXPECT_DOUBLE_EQ(c.x, 0.5);
  EXPECT_DOUBLE_EQ(c.y, 0.5);
}

TEST(InteriorPoint, ConcaveUShape) {
  const Polygon u = u_shape();
  double cx = 0, cy = 0;
  for (Vec2 v : u.vertices()) {
    cx += v.x / 8;
    cy += v.y / 8;
  }
  ASSERT_FALSE(vaq::point_in_polygon({cx, cy}, u));  // the premise of this case
  const Vec2 p = vaq::interior_point(u);
  EXPECT_TRUE(vaq::point_in_polygon(p, u));
  EXPECT_TRUE(oracle::inside_by_angle_sum(p, {u.vertices().begin(), u.vertices().end()}));
}

TEST(InteriorPoint, RandomPolygonsStrictlyInside) {
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const Polygon a = vaq::random_query_polygon(seed, 0.01);
    const Vec2 p = vaq::interior_point(a);
    EXPECT_TRUE(vaq::point_in_polygon(p, a));
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NE(vaq::orient(a[i], a.next(i), p), 0);
  }
}

TEST(PolygonCtor, RejectsBadInput) {
  EXPECT_THROW(Polygon({{0, 0}, {1, 0}}), vaq::geometry_error);
  EXPECT_THROW(Polygon({{0, 0}, {1, 0}, {NAN, 1}}), vaq::geometry_error);
  EXPECT_THROW(Polygon({{0, 0}, {1, 0}, {1, 0}, {0, 1}}), vaq::geometry_error);
  // Bow tie.
  EXPECT_THROW(Polygon({{0, 0}, {1, 1}, {1, 0}, {0, 1}}), vaq::geometry_error);
}

TEST(PolygonCtor, ClockwiseInputIsReoriented) {
  const Polygon cw({{0, 0}, {0, 1}, {1, 1}, {1, 0}});
  EXPECT_GT(cw.area(), 0.0);
  for (std::size_t i = 0; i < cw.size(); ++i) {
    EXPECT_GE(vaq::orient(cw.prev(i), cw[i], cw.next(i)), 0);
  }
}

TEST(QueryPolygon, TenVerticesCcwSimpleAndExactMbrArea) {
  for (double q : {0.01, 0.02, 0.04, 0.08, 0.16, 0.32, 0.9}) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      const Polygon a = vaq::random_query_polygon(seed, q);
      ASSERT_EQ(a.size(), 10u);
      EXPECT_GT(a.area(), 0.0);
      EXPECT_NEAR(vaq::mbr(a).area(), q, 1e-9) << "seed " << seed << " q " << q;
      EXPECT_TRUE(Rect::unit().contains(vaq::mbr(a)));
      // Re-running the constructor checks simplicity.
      EXPECT_NO_THROW(Polygon(std::vector<Vec2>(a.vertices().begin(), a.vertices().end())));
    }
  }
}

TEST(QueryPolygon, Reproducible) {
  const Polygon a = vaq::random_query_polygon(42, 0.01);
  const Polygon b = vaq::random_query_polygon(42, 0.01);
  EXPECT_EQ(a, b);
  EXPECT_EQ(vaq::format_polygon(a), vaq::format_polygon(b));
  EXPECT_FALSE(a == vaq::random_query_polygon(43, 0.01));
}

TEST(QueryPolygon, FillRatio) {
  const Polygon a = vaq::random_query_polygon(42, 0.01);
  const double r = a.area() / vaq::mbr(a).area();
  EXPECT_GT(r, 0.0);
  EXPECT_LT(r, 1.0);

  double sum = 0.0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const Polygon p = vaq::random_query_polygon(seed, 0.01);
    sum += p.area() / vaq::mbr(p).area();
  }
  EXPECT_NEAR(sum / 1000.0, 0.53, 0.03);
}

TEST(QueryPolygon, RejectsBadSize) {
  EXPECT_THROW(vaq::random_query_polygon(1, 0.0), vaq::geometry_error);
  EXPECT_THROW(vaq::random_query_polygon(1, 1.5), vaq::geometry_error);
  EXPECT_THROW(vaq::random_query_polygon(1, NAN), vaq::geometry_error);
}

TEST(PolygonText, RoundTrip) {
  const Polygon a = vaq::random_query_polygon(5, 0.1);
  EXPECT_EQ(vaq::parse_polygon(vaq::format_polygon(a)), a);
  EXPECT_THROW(vaq::parse_polygon("0 0 1 0 1"), vaq::geometry_error);
  EXPECT_THROW(vaq::parse_polygon("0 0 1 0 x 1"), vaq::geometry_error);
}

TEST(Rng, DeterministicAndInRange) {
  vaq::Rng a(3), b(3);
  for (int i = 0; i < 1000; ++i) {
    const double x = a.uniform();
    EXPECT_EQ(x, b.uniform());
    EXPECT_GE(x, 0.0);
    EXPECT_LT(x, 1.0);
    EXPECT_LT(a.below(7), 7u);
    b.below(7);
  }
  EXPECT_NE(vaq::mix_seed(1, 2), vaq::mix_seed(2, 1));
}

TEST(SegmentTouchesBoundary, Cases) {
  const vaq::Polygon sq({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  EXPECT_TRUE(vaq::segment_touches_boundary({-1, 0.5}, {2, 0.5}, sq));
  EXPECT_TRUE(vaq::segment_touches_boundary({0.5, 0.5}, {0.5, 3}, sq));
  EXPECT_TRUE(vaq::segment_touches_boundary({-1, -1}, {0, 0}, sq));  // meets a corner
  EXPECT_TRUE(vaq::segment_touches_boundary({1, 0.2}, {1, 0.7}, sq));  // lies on an edge
  EXPECT_FALSE(vaq::segment_touches_boundary({0.2, 0.2}, {0.8, 0.8}, sq));  // strictly inside
  EXPECT_FALSE(vaq::segment_touches_boundary({2, 2}, {3, 5}, sq));
  EXPECT_FALSE(vaq::segment_touches_boundary({-0.5, 0.5}, {0.5, 1.5 + 1e-9}, sq));
}
