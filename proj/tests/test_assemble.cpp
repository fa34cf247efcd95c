#include <cmath>

#include "test_util.hpp"
#include "tornmend/assemble.hpp"

using namespace tornmend;

namespace {

Fragment block(int w, int h, std::uint8_t value) {
  return Fragment{GrayImage(w, h, value), BinaryMask(w, h, 1), Affine{}, 40};
}

Polyline vertical_seam(double x, double h) { return Polyline{{{x, -1.0}, {x, h}}, false}; }

}  // namespace

TEST(Place, CanvasSpansBothFragmentsAndGap) {
  for (int gap : {0, 3, 7}) {
    const Canvas c = place(block(20, 10, 100), block(20, 10, 200), Placement{0, {20.0 + gap, 0.0}, {}},
                           vertical_seam(19.5, 10));
    EXPECT_NEAR(c.width(), 40 + gap, 4);
    EXPECT_NEAR(c.height(), 10, 4);
    EXPECT_EQ(c.origin, (Point{-2.0, -2.0}));
    EXPECT_EQ(c.seam.points.front(), (Point{21.5, 1.0}));
  }
}

TEST(Place, RejectsFarTranslations) {
  EXPECT_ERROR_CODE(place(block(10, 10, 1), block(10, 10, 2), Placement{0, {1000.0, 0.0}, {}}, {}),
                    ErrorCode::PlacementOutOfRange);
}

TEST(Place, HalfTurnMapsPixels) {
  Fragment b = block(4, 2, 0);
  b.image(0, 0) = 7;
  // Half turn about (1.5, 0.5) then 4 px right: (0, 0) lands on (7, 1).
  const Canvas c = place(block(4, 2, 50), b, Placement{180, {4.0, 0.0}, {1.5, 0.5}}, {}, 0);
  EXPECT_EQ(c.origin, (Point{0.0, 0.0}));
  EXPECT_EQ(c.layer_b(7, 1), 7);
  EXPECT_EQ(c.alpha_b(7, 1), 1.0);
  EXPECT_EQ(c.alpha_b(3, 1), 0.0);
}

TEST(Blend, ZeroFeatherLetsBWinOverlap) {
  const Canvas c = place(block(20, 10, 100), block(20, 10, 200), Placement{0, {15.0, 0.0}, {}}, vertical_seam(17, 10));
  const BlendResult r = blend(c, BlendParams{0.0, 8.0});
  const int y = 5 - static_cast<int>(c.origin.y);
  for (int x = 15; x < 20; ++x) EXPECT_EQ(r.image(x - static_cast<int>(c.origin.x), y), 200);
  EXPECT_EQ(r.image(5 - static_cast<int>(c.origin.x), y), 100);
}

TEST(Blend, ConstantStaysConstant) {
  const Canvas c = place(block(20, 10, 150), block(20, 10, 150), Placement{0, {12.0, 0.0}, {}}, vertical_seam(16, 10));
  const BlendResult r = blend(c, {});
  for (int y = 0; y < c.height(); ++y)
    for (int x = 0; x < c.width(); ++x)
      if (c.alpha_a(x, y) > 0 || c.alpha_b(x, y) > 0) ASSERT_EQ(r.image(x, y), 150);
}

TEST(Blend, TransectIsMonotone) {
  // Overlap of 24..29 lies entirely inside the feather band around x = 27.
  const Canvas c = place(block(30, 10, 60), block(30, 10, 220), Placement{0, {24.0, 0.0}, {}}, vertical_seam(27, 10));
  const BlendResult r = blend(c, BlendParams{3.0, 8.0});
  const int y = 5 - static_cast<int>(c.origin.y);
  int prev = -1;
  bool mixed = false;
  for (int x = 0; x < c.width(); ++x) {
    if (c.alpha_a(x, y) == 0 && c.alpha_b(x, y) == 0) continue;
    const int v = r.image(x, y);
    ASSERT_GE(v, prev) << "x " << x;
    mixed |= v > 60 && v < 220;
    prev = v;
  }
  EXPECT_TRUE(mixed);
}

TEST(Blend, GapAndCoverPartitionCanvas) {
  const Canvas c = place(block(20, 12, 90), block(20, 12, 180), Placement{0, {23.0, 2.0}, {}}, vertical_seam(21, 12));
  const BlendResult r = blend(c, {});
  for (int y = 0; y < c.height(); ++y)
    for (int x = 0; x < c.width(); ++x) {
      const bool covered = c.alpha_a(x, y) > 0 || c.alpha_b(x, y) > 0;
      ASSERT_NE(covered, r.gap_mask(x, y) == 1);
      if (r.gap_mask(x, y)) ASSERT_EQ(r.image(x, y), 255);
      ASSERT_LE(r.sliver_mask(x, y), r.gap_mask(x, y));
    }
  // The three lost columns between the pieces are the sliver.
  for (int y = 2; y < 12; ++y)
    for (int x = 20; x < 23; ++x)
      EXPECT_EQ(r.sliver_mask(x - static_cast<int>(c.origin.x), y - static_cast<int>(c.origin.y)), 1);
}

TEST(Blend, NegativeParamsRejected) {
  EXPECT_ERROR_CODE((BlendParams{-1.0, 8.0}.validate()), ErrorCode::InvalidConfig);
  EXPECT_ERROR_CODE((BlendParams{3.0, -1.0}.validate()), ErrorCode::InvalidConfig);
}

TEST(Seam, SignedDistance) {
  const Polyline seam{{{0, 0}, {0, 10}}, false};
  EXPECT_DOUBLE_EQ(signed_seam_distance({-2, 5}, seam, {-5, 5}), 2.0);
  EXPECT_DOUBLE_EQ(signed_seam_distance({3, 5}, seam, {-5, 5}), -3.0);
}

TEST(Seam, MidpointsOfCorrespondences) {
  SideSegment a, b;
  a.chain = Polyline{{{0, 10}, {0, 0}}, false};
  b.chain = Polyline{{{2, 0}, {2, 10}}, false};
  const Polyline s = seam_polyline(a, b, Placement{}, 3);
  EXPECT_EQ(s.points, (std::vector<Point>{{1, 10}, {1, 5}, {1, 0}}));
}

TEST(Snap, WholePixelOffsets) {
  const Placement p = snap_placement(Placement{0, {3.4, -2.6}, {}});
  EXPECT_EQ(p.translation, (Point{3.0, -3.0}));
  const Placement h = snap_placement(Placement{180, {0.3, 0.2}, {10.25, 4.5}});
  const Point k = 2.0 * h.pivot + h.translation;
  EXPECT_EQ(k.x, std::round(k.x));
  EXPECT_EQ(k.y, std::round(k.y));
  EXPECT_NEAR(k.x, 20.8, 0.5);
}

TEST(TextRefine, DisabledDoesNothing) {
  TextRefineParams p;
  p.enabled = false;
  const auto r = refine_by_text(block(10, 10, 255), block(10, 10, 255), {}, {1, 0}, p);
  EXPECT_FALSE(r.applied);
  EXPECT_EQ(r.shift, (Point{}));
}
