#include <cmath>
#include <random>

#include "oracles.hpp"
#include "test_util.hpp"
#include "tornmend/assemble.hpp"
#include "tornmend/fragment.hpp"
#include "tornmend/morphology.hpp"

using namespace tornmend;

TEST(Morphology, LabelsFourVersusEight) {
  BinaryMask m(3, 3);
  m(0, 0) = m(1, 1) = m(2, 2) = 1;
  EXPECT_EQ(label_components(m, Connectivity::eight).count(), 1u);
  EXPECT_EQ(label_components(m, Connectivity::four).count(), 3u);
}

TEST(Morphology, LargestComponentEarliestWinsTie) {
  BinaryMask m(5, 1);
  m(0, 0) = m(1, 0) = m(3, 0) = m(4, 0) = 1;
  const auto big = largest_component(m);
  EXPECT_EQ(big(0, 0), 1);
  EXPECT_EQ(big(3, 0), 0);
}

TEST(Morphology, FillHolesClosesInteriorOnly) {
  BinaryMask ring(5, 5);
  for (int i = 0; i < 5; ++i) ring(i, 0) = ring(i, 4) = ring(0, i) = ring(4, i) = 1;
  const auto filled = fill_holes(ring);
  EXPECT_EQ(filled.count(), 25u);
  ring(2, 0) = 0;  // opened to the border
  EXPECT_EQ(fill_holes(ring).count(), ring.count());
}

TEST(Morphology, DistanceTransformMatchesBruteForce) {
  std::mt19937_64 rng(5);
  BinaryMask m(23, 17);
  for (int k = 0; k < 6; ++k) m(rng() % 23, rng() % 17) = 1;
  const RealImage d = distance_to(m);
  for (int y = 0; y < 17; ++y)
    for (int x = 0; x < 23; ++x) {
      double best = 1e300;
      for (int v = 0; v < 17; ++v)
        for (int u = 0; u < 23; ++u)
          if (m(u, v)) best = std::min(best, std::hypot(x - u, y - v));
      ASSERT_NEAR(d(x, y), best, 1e-9);
    }
}

TEST(Morphology, DilateErodeRadius) {
  BinaryMask dot(9, 9);
  dot(4, 4) = 1;
  EXPECT_EQ(dilate(dot, 1.0).count(), 5u);
  EXPECT_EQ(dilate(dot, 1.5).count(), 9u);
  EXPECT_EQ(erode(dilate(dot, 1.5), 1.0).count(), 1u);
}

// ---------------------------------------------------------------------------
// Bounding box

TEST(BoundingBox, SinglePixel) {
  BinaryMask m(8, 8);
  m(3, 4) = 1;
  EXPECT_EQ(bounding_box(m), (Rect{4, 4, 3, 3}));
}

TEST(BoundingBox, AllForeground) {
  const BinaryMask m(7, 5, 1);
  EXPECT_EQ(bounding_box(m), (Rect{0, 4, 0, 6}));
}

TEST(BoundingBox, TwoBlobs) {
  BinaryMask m(12, 9);
  m(2, 2) = m(10, 7) = 1;
  EXPECT_EQ(bounding_box(m), (Rect{2, 7, 2, 10}));
}

TEST(BoundingBox, EmptyMaskThrows) { EXPECT_ERROR_CODE(bounding_box(BinaryMask(3, 3)), ErrorCode::EmptyMask); }

TEST(BoundingBox, MatchesBruteForceOnRandomMasks) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    BinaryMask m(1 + rng() % 30, 1 + rng() % 30);
    const int n = 1 + static_cast<int>(rng() % 10);
    for (int k = 0; k < n; ++k) m(rng() % m.width(), rng() % m.height()) = 1;
    int r0 = 1 << 30, r1 = -1, c0 = 1 << 30, c1 = -1;
    for (int y = 0; y < m.height(); ++y)
      for (int x = 0; x < m.width(); ++x)
        if (m(x, y)) {
          r0 = std::min(r0, y), r1 = std::max(r1, y), c0 = std::min(c0, x), c1 = std::max(c1, x);
        }
    ASSERT_EQ(bounding_box(m), (Rect{r0, r1, c0, c1}));
  }
}

// ---------------------------------------------------------------------------
// Silhouette

TEST(Silhouette, PaperOnDarkBackground) {
  GrayImage img(40, 30, 40);
  for (int y = 5; y < 25; ++y)
    for (int x = 8; x < 30; ++x) img(x, y) = 250;
  // Text on the paper must not punch holes in the silhouette.
  for (int x = 12; x < 20; ++x) img(x, 12) = 0;
  const Fragment f = make_fragment(img);
  EXPECT_EQ(f.mask.count(), 20u * 22u);
  EXPECT_EQ(f.background, 40);
  EXPECT_EQ(bounding_box(f.mask), (Rect{5, 24, 8, 29}));
}

TEST(Silhouette, BlankScanHasNoPaper) { EXPECT_ERROR_CODE(make_fragment(GrayImage(10, 10, 40)), ErrorCode::EmptyMask); }
