#include <cmath>
#include <random>
#include <set>

#include "oracles.hpp"
#include "test_util.hpp"
#include "tornmend/contour.hpp"
#include "tornmend/fragment.hpp"
#include "tornmend/harness.hpp"

using namespace tornmend;

namespace {

// Unit-step ring through the given corners (closed, first corner not repeated).
Polyline ring(const std::vector<Point>& corners) {
  Polyline out{{}, true};
  for (std::size_t k = 0; k < corners.size(); ++k) {
    const Point a = corners[k];
    const Point b = corners[(k + 1) % corners.size()];
    const int steps = static_cast<int>(std::ceil(std::max(std::abs(b.x - a.x), std::abs(b.y - a.y))));
    for (int i = 0; i < steps; ++i) out.points.push_back(a + (double(i) / steps) * (b - a));
  }
  return out;
}

// Counter-clockwise as displayed: down the left, along the bottom, up the right.
Polyline rectangle(double w, double h) { return ring({{0, 0}, {0, h}, {w, h}, {w, 0}}); }

std::vector<Point> random_polyline(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> step(-5.0, 5.0);
  const int n = 2 + static_cast<int>(rng() % 60);
  std::vector<Point> pts{{0.0, 0.0}};
  for (int i = 1; i < n; ++i) {
    // Integer-heavy coordinates exercise exact ties with the tolerance.
    Point p = pts.back() + Point{std::round(step(rng)), std::round(step(rng))};
    if (rng() % 3 == 0) p = p + Point{step(rng) * 0.1, step(rng) * 0.1};
    if (p == pts.back()) p.x += 1.0;
    pts.push_back(p);
  }
  return pts;
}

}  // namespace

TEST(Trace, FullThreeByThree) {
  const BinaryMask m(3, 3, 1);
  const Polyline b = trace_boundary(m);
  EXPECT_TRUE(b.closed);
  const std::vector<Point> expected{{0, 0}, {0, 1}, {0, 2}, {1, 2}, {2, 2}, {2, 1}, {2, 0}, {1, 0}};
  EXPECT_EQ(b.points, expected);
}

TEST(Trace, Degenerate) {
  BinaryMask m(8, 8);
  EXPECT_ERROR_CODE(trace_boundary(m), ErrorCode::EmptyMask);
  m(3, 4) = 1;
  EXPECT_ERROR_CODE(trace_boundary(m), ErrorCode::EmptyBoundary);
}

TEST(Trace, CounterClockwiseFromTopLeft) {
  const BinaryMask m = oracle::blob(24, 20, 4);
  const Polyline b = trace_boundary(m);
  EXPECT_GT(signed_area(b), 0.0);
  int top = 1 << 30, left = 1 << 30;
  for (int y = 0; y < m.height() && top == 1 << 30; ++y)
    for (int x = 0; x < m.width(); ++x)
      if (m(x, y)) {
        top = y;
        left = x;
        break;
      }
  EXPECT_EQ(b.points.front(), (Point{double(left), double(top)}));
}

TEST(Trace, VertexSetEqualsBoundaryPixelScan) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const BinaryMask m = oracle::blob(16, 16, seed);
    const Polyline b = trace_boundary(m);
    std::set<std::pair<int, int>> traced;
    for (Point p : b.points) traced.insert({int(p.x), int(p.y)});
    ASSERT_EQ(traced, oracle::boundary_pixels(m)) << "seed " << seed;
  }
}

TEST(PointSegment, Examples) {
  EXPECT_DOUBLE_EQ(point_segment_distance({1, 0}, {0, 0}, {2, 0}), 0.0);
  EXPECT_DOUBLE_EQ(point_segment_distance({1, 1}, {0, 0}, {2, 0}), 1.0);
  EXPECT_DOUBLE_EQ(point_segment_distance({5, 1}, {0, 0}, {2, 0}), std::sqrt(10.0));
  EXPECT_DOUBLE_EQ(point_segment_distance({3, 4}, {0, 0}, {0, 0}), 5.0);
}

TEST(Simplify, Examples) {
  const Polyline two{{{0, 0}, {5, 5}}, false};
  EXPECT_EQ(simplify_dp(two, 100.0), two);
  const Polyline flat{{{0, 0}, {1, 0}, {2, 0}, {3, 0}}, false};
  EXPECT_EQ(simplify_dp(flat, 0.1).points, (std::vector<Point>{{0, 0}, {3, 0}}));
  const Polyline tent{{{0, 0}, {1, 1}, {2, 0}}, false};
  EXPECT_EQ(simplify_dp(tent, 0.5).size(), 3u);
  EXPECT_EQ(simplify_dp(tent, 1.0).points, (std::vector<Point>{{0, 0}, {2, 0}}));
}

TEST(Simplify, MatchesStackReferenceOnRandomPolylines) {
  std::mt19937_64 rng(123);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto pts = random_polyline(rng);
    const double t = 0.5 + (rng() % 8) * 0.5;
    ASSERT_EQ(simplify_dp_indices(Polyline{pts, false}, t), oracle::douglas_peucker(pts, t)) << "trial " << trial;
  }
}

TEST(Simplify, RemovedVerticesWithinToleranceAndIdempotent) {
  std::mt19937_64 rng(321);
  for (int trial = 0; trial < 1000; ++trial) {
    const Polyline line{random_polyline(rng), false};
    const double t = 0.5 + (rng() % 8) * 0.5;
    const Polyline s = simplify_dp(line, t);
    ASSERT_EQ(s.points.front(), line.points.front());
    ASSERT_EQ(s.points.back(), line.points.back());
    for (Point p : line.points) ASSERT_LE(oracle::chain_distance(p, s.points), t + 1e-9);
    ASSERT_EQ(simplify_dp(s, t), s);
  }
}

TEST(Simplify, ClosedRingKeepsFarthestPair) {
  const Polyline r = rectangle(10, 6);
  const Polyline s = simplify_dp(r, 0.5);
  EXPECT_TRUE(s.closed);
  EXPECT_EQ(s.size(), 4u);
}

TEST(Sides, RectangleIsFourUniformSides) {
  const auto sides = split_sides(rectangle(100, 80));
  ASSERT_EQ(sides.size(), 4u);
  for (const auto& s : sides) EXPECT_EQ(s.classification, SideClass::uniform);
}

TEST(Sides, SawtoothSideIsTheOnlyNonUniform) {
  const Polyline r = ring({{0, 0}, {0, 80}, {100, 80}, {110, 60}, {100, 40}, {110, 20}, {100, 0}});
  const auto sides = split_sides(r, SimplifyParams{2.0});
  ASSERT_EQ(sides.size(), 4u);
  int jagged = 0;
  for (const auto& s : sides) jagged += s.classification == SideClass::non_uniform;
  EXPECT_EQ(jagged, 1);
}

TEST(Sides, ConcatenateBackToBoundary) {
  const Polyline r = ring({{0, 0}, {0, 80}, {100, 80}, {110, 60}, {100, 40}, {110, 20}, {100, 0}});
  const auto sides = split_sides(r);
  std::vector<Point> joined;
  for (std::size_t k = 0; k < sides.size(); ++k) {
    const auto& c = sides[k].chain.points;
    if (k > 0) {
      // Consecutive sides share exactly one endpoint.
      ASSERT_EQ(c.front(), sides[k - 1].chain.points.back());
    }
    joined.insert(joined.end(), c.begin(), c.end() - 1);
  }
  ASSERT_EQ(sides.back().chain.points.back(), sides.front().chain.points.front());
  // Rotate so both start at the first cut.
  std::vector<Point> expected(r.points.begin() + static_cast<std::ptrdiff_t>(sides.front().first), r.points.end());
  expected.insert(expected.end(), r.points.begin(), r.points.begin() + static_cast<std::ptrdiff_t>(sides.front().first));
  EXPECT_EQ(joined, expected);
}

TEST(Sides, TooFewPoints) {
  EXPECT_ERROR_CODE(split_sides(Polyline{{{0, 0}, {1, 0}, {1, 1}}, true}), ErrorCode::DegenerateBoundary);
}

TEST(Sides, SvgHasOnePathPerSide) {
  const auto sides = split_sides(rectangle(20, 10));
  const std::string svg = sides_to_svg(sides, 21, 11);
  std::size_t paths = 0;
  for (std::size_t at = 0; (at = svg.find("<path", at)) != std::string::npos; ++at) ++paths;
  EXPECT_EQ(paths, sides.size());
}

// ---------------------------------------------------------------------------
// Boundaries of harness fragments

namespace {

HarnessGeometry small_geometry() {
  HarnessGeometry g;
  g.page_width = 320;
  g.page_height = 240;
  g.canvas_width = 420;
  g.canvas_height = 330;
  g.margin_x = 50;
  g.margin_y = 45;
  return g;
}

TornPair small_pair(std::uint64_t seed, int rim) {
  const HarnessGeometry g = small_geometry();
  TearSpec spec;
  spec.seed = seed;
  spec.kind = seed % 2 ? TearSpec::Kind::polyline : TearSpec::Kind::straight;
  spec.amplitude = 12.0;
  spec.gap_width = static_cast<double>(seed % 3);
  spec.rim_width = rim;
  spec.flip_b = seed % 4 == 1;
  const Document doc = make_document(seed, Dictionary::bundled(), GlyphAtlas::bundled(), g.page_width, g.page_height);
  return generate_pair(doc.page, spec, g);
}

}  // namespace

TEST(Boundaries, CleanFragmentHasNoInner) {
  const TornPair p = small_pair(1, 0);
  const Fragment f = make_fragment(p.a);
  const BoundarySet b = extract_boundaries(f.image, f.mask);
  EXPECT_FALSE(b.inner.has_value());
  EXPECT_EQ(&b.matching(), &b.outer);
}

TEST(Boundaries, DarkRimYieldsInnerStrictlyInside) {
  const TornPair p = small_pair(2, 2);
  const Fragment f = make_fragment(p.a);
  const BoundarySet b = extract_boundaries(f.image, f.mask);
  ASSERT_TRUE(b.inner.has_value());
  EXPECT_EQ(&b.matching(), &*b.inner);
  std::vector<Point> outer = b.outer.points;
  outer.push_back(outer.front());
  for (Point p : b.inner->points) {
    ASSERT_TRUE(point_in_polygon(p, b.outer));
    ASSERT_GE(oracle::chain_distance(p, outer), 1.0);
  }
}

TEST(Boundaries, SimpleOnHarnessFragments) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const TornPair p = small_pair(seed, seed % 2 ? 2 : 0);
    for (const GrayImage* scan : {&p.a, &p.b}) {
      const Fragment f = make_fragment(*scan);
      const BoundarySet b = extract_boundaries(f.image, f.mask);
      ASSERT_TRUE(b.outer.closed);
      ASSERT_FALSE(oracle::self_intersects(b.outer.points)) << "seed " << seed;
      if (b.inner) {
        ASSERT_TRUE(b.inner->closed);
        ASSERT_FALSE(oracle::self_intersects(b.inner->points)) << "seed " << seed;
      }
    }
  }
}

TEST(Boundaries, HarnessFragmentsHaveANonUniformSide) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const TornPair p = small_pair(seed, 0);
    for (const GrayImage* scan : {&p.a, &p.b}) {
      const Fragment f = make_fragment(*scan);
      const auto sides = split_sides(extract_boundaries(f.image, f.mask).matching());
      int jagged = 0;
      for (const auto& s : sides) jagged += s.classification == SideClass::non_uniform;
      EXPECT_GE(jagged, 1) << "seed " << seed;
    }
  }
}
