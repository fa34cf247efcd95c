#include <cmath>
#include <random>

#include "test_util.hpp"
#include "tornmend/matching.hpp"

using namespace tornmend;

namespace {

// Jagged tear running up the right edge of A, x around 50.
std::vector<Point> tear(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-6.0, 6.0);
  std::vector<Point> pts;
  for (int y = 200; y >= 0; y -= 8) pts.push_back({50.0 + u(rng), double(y)});
  return pts;
}

SideSegment side(std::vector<Point> pts, int index = 0, SideClass cls = SideClass::non_uniform) {
  SideSegment s;
  s.chain = Polyline{std::move(pts), false};
  s.classification = cls;
  s.side_index = index;
  return s;
}

// The facing side of B: the same tear traversed the other way, one pixel across, then moved.
std::vector<Point> facing(const std::vector<Point>& a, Point move) {
  std::vector<Point> b(a.rbegin(), a.rend());
  for (auto& p : b) p = p + Point{1.0, 0.0} + move;
  return b;
}

std::vector<Point> half_turn(std::vector<Point> pts, Point about) {
  for (auto& p : pts) p = 2.0 * about - p;
  return pts;
}

const Point kExtent{240.0, 240.0};

}  // namespace

TEST(Matching, EuclideanDistance) {
  EXPECT_EQ(euclidean_distance({0, 0}, {3, 4}), 5.0);
  EXPECT_EQ(euclidean_distance({1, 1}, {1, 1}), 0.0);
}

TEST(Resample, EqualArcLength) {
  const auto s = resample(Polyline{{{0, 0}, {10, 0}}, false}, 6);
  ASSERT_EQ(s.size(), 6u);
  for (int k = 0; k < 6; ++k) EXPECT_NEAR(s[k].x, 2.0 * k, 1e-12);
  const auto l = resample(Polyline{{{0, 0}, {4, 0}, {4, 4}}, false}, 3);
  EXPECT_EQ(l, (std::vector<Point>{{0, 0}, {4, 0}, {4, 4}}));
}

TEST(Resample, ZeroLength) {
  EXPECT_ERROR_CODE(resample(Polyline{{{1, 1}}, false}, 4), ErrorCode::ZeroLengthChain);
  EXPECT_ERROR_CODE(resample(Polyline{{{1, 1}, {1, 1}}, false}, 4), ErrorCode::ZeroLengthChain);
}

TEST(Profile, StraightOffsetHasZeroVariance) {
  std::vector<Point> a, b;
  // A's right edge runs upwards; B sits 3 px outside it.
  for (int y = 9; y >= 0; --y) a.push_back({0.0, double(y)});
  for (int y = 0; y < 10; ++y) b.push_back({3.0, double(y)});
  const auto p = distance_profile(a, b, Placement{});
  EXPECT_DOUBLE_EQ(p.mean, 3.0);
  EXPECT_DOUBLE_EQ(p.variance, 0.0);
  EXPECT_EQ(p.samples.size(), 10u);
}

TEST(Profile, InsideSamplesAreNegative) {
  const std::vector<Point> a{{0, 2}, {0, 1}, {0, 0}};
  const std::vector<Point> b{{-2, 0}, {-2, 1}, {-2, 2}};
  const auto p = distance_profile(a, b, Placement{});
  EXPECT_EQ(p.samples, (std::vector<double>{-2, -2, -2}));
  const auto q = distance_profile(a, b, Placement{0, {4.0, 0.0}, {}});
  EXPECT_EQ(q.samples, (std::vector<double>{2, 2, 2}));
}

TEST(Profile, SawtoothCannotHideByCrossing) {
  // Teeth 10 px high; a straight side through their middle would look close
  // in unsigned distance, but it lies inside the fragment.
  std::vector<Point> saw;
  for (int k = 10; k >= 0; --k) saw.push_back({50.0 + (k % 2 ? 10.0 : 0.0), 20.0 * k});
  const auto al = align_sides(side(saw), side({{55, 0}, {55, 200}}), 0, kExtent);
  EXPECT_GT(al.variance, 1.5 * 1.5);
}

TEST(Profile, SawtoothAgainstStraightVaries) {
  const SideSegment saw = side({{0, 0}, {10, 10}, {0, 20}, {10, 30}, {0, 40}});
  const SideSegment flat = side({{-1, 40}, {-1, 0}});
  const auto al = align_sides(saw, flat, 0, kExtent);
  EXPECT_GE(al.variance, 1.0);
}

TEST(Align, RecoversDisplacement) {
  const auto a = tear(1);
  const SideSegment sa = side(a);
  const SideSegment sb = side(facing(a, {37.0, -12.0}));
  const auto al = align_sides(sa, sb, 0, kExtent);
  EXPECT_NEAR(al.translation.x, -37.0, 1.0);
  EXPECT_NEAR(al.translation.y, 12.0, 1.0);
  EXPECT_LT(al.variance, 0.05);
  EXPECT_LE(al.variance, 1.5 * 1.5);
}

TEST(Align, RecoversHalfTurn) {
  const auto a = tear(2);
  const SideSegment sa = side(a, 0);
  const SideSegment sb = side(half_turn(facing(a, {20.0, 5.0}), {120.0, 90.0}), 0);
  const auto turned = align_sides(sa, sb, 180, kExtent);
  const auto straight = align_sides(sa, sb, 0, kExtent);
  EXPECT_LT(turned.variance, 0.05);
  EXPECT_GT(straight.variance, turned.variance);
  const auto sel = select_pair({sa}, {sb}, {0, 180}, kExtent);
  EXPECT_EQ(sel.best.placement.rotation, 180);
  EXPECT_TRUE(sel.best.accepted);
  EXPECT_EQ(sel.candidates.size(), 2u);
}

TEST(Align, TranslationInvariant) {
  const auto a = tear(3);
  const auto b = facing(a, {4.0, 9.0});
  const Point shift{13.0, -7.0};
  auto moved = [&](std::vector<Point> v) {
    for (auto& p : v) p = p + shift;
    return v;
  };
  for (int rot : {0, 180}) {
    const auto x = align_sides(side(a), side(b), rot, kExtent);
    const auto y = align_sides(side(moved(a)), side(moved(b)), rot, kExtent);
    EXPECT_NEAR(x.translation.x, y.translation.x, 1e-9);
    EXPECT_NEAR(x.translation.y, y.translation.y, 1e-9);
    EXPECT_NEAR(x.variance, y.variance, 1e-9);
  }
}

TEST(Align, SymmetricInArguments) {
  const auto a = tear(4);
  const auto b = facing(a, {-6.0, 3.0});
  const auto ab = align_sides(side(a), side(b), 0, kExtent);
  const auto ba = align_sides(side(b), side(a), 0, kExtent);
  EXPECT_NEAR(ab.variance, ba.variance, 1e-9);
  EXPECT_NEAR(ab.translation.x, -ba.translation.x, 1e-9);
  EXPECT_NEAR(ab.translation.y, -ba.translation.y, 1e-9);
}

TEST(Align, VarianceGrowsWithPerturbation) {
  const auto a = tear(5);
  double prev = -1.0;
  for (double k : {0.0, 0.5, 1.0, 2.0, 4.0}) {
    auto b = facing(a, {0.0, 0.0});
    for (std::size_t i = 0; i < b.size(); ++i) b[i].x += (i % 2 ? k : -k);
    const auto al = align_sides(side(a), side(b), 0, kExtent, MatchParams{1.5, static_cast<int>(a.size())});
    EXPECT_GE(al.variance, prev - 1e-9) << "k " << k;
    prev = al.variance;
  }
  EXPECT_GT(prev, 1.5 * 1.5);
}

TEST(Select, NeedsNonUniformSides) {
  const auto a = tear(6);
  const SideSegment flat = side({{0, 0}, {0, 10}}, 0, SideClass::uniform);
  EXPECT_ERROR_CODE(select_pair({flat}, {side(a)}, {0}, kExtent), ErrorCode::NoCandidate);
  EXPECT_ERROR_CODE(select_pair({side(a)}, {flat}, {0}, kExtent), ErrorCode::NoCandidate);
}

TEST(Select, TiesGoToLowerSideIndices) {
  const auto a = tear(7);
  const auto b = facing(a, {2.0, 2.0});
  const auto sel = select_pair({side(a, 3), side(a, 1)}, {side(b, 5), side(b, 2)}, {0}, kExtent);
  EXPECT_EQ(sel.best.side_a, 1);
  EXPECT_EQ(sel.best.side_b, 2);
  EXPECT_EQ(sel.candidates.size(), 4u);
}

TEST(Select, UniformSidesAreSkipped) {
  const auto a = tear(8);
  const SideSegment flat = side({{0, 0}, {0, 10}}, 1, SideClass::uniform);
  const auto sel = select_pair({flat, side(a, 2)}, {side(facing(a, {}), 0)}, {0, 180}, kExtent);
  EXPECT_EQ(sel.candidates.size(), 2u);
  EXPECT_EQ(sel.best.side_a, 2);
}

TEST(Placement, InverseUndoes) {
  for (int rot : {0, 180}) {
    const Placement p{rot, {5.5, -3.0}, {10.0, 20.0}};
    const Placement q = p.inverse({-4.0, 7.0});
    const Point x{3.25, 8.5};
    const Point y = q.apply(p.apply(x));
    EXPECT_NEAR(y.x, x.x, 1e-12);
    EXPECT_NEAR(y.y, x.y, 1e-12);
    const Point z = p.affine().apply(x);
    EXPECT_NEAR(z.x, p.apply(x).x, 1e-12);
    EXPECT_NEAR(z.y, p.apply(x).y, 1e-12);
  }
}

TEST(EdgeSupport, CountsNearbyEdges) {
  BinaryMask e(10, 10);
  e(5, 5) = 1;
  EXPECT_EQ(edge_support({{5, 5}, {5, 7}, {9, 9}}, e, 2.0), 2.0 / 3.0);
  EXPECT_EQ(edge_support({}, e, 2.0), 0.0);
}
