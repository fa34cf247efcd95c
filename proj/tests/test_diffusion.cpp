#include <cmath>
#include <random>

#include "test_util.hpp"
#include "tornmend/diffusion.hpp"

using namespace tornmend;

namespace {

RealImage random_real(int w, int h, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RealImage img(w, h);
  for (auto& v : img.data()) v = u(rng);
  return img;
}

double sum(const RealImage& img) {
  double s = 0.0;
  for (double v : img.data()) s += v;
  return s;
}

RealImage step_edge(int w, int h) {
  RealImage img(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = w / 2; x < w; ++x) img(x, y) = 1.0;
  return img;
}

double mid_contrast(const RealImage& img) {
  const int y = img.height() / 2;
  return img(img.width() / 2, y) - img(img.width() / 2 - 1, y);
}

}  // namespace

TEST(Conduction, ValuesAtZeroAndKappa) {
  for (auto kind : {Conduction::exponential, Conduction::rational}) EXPECT_EQ(conduction(0.0, 0.3, kind), 1.0);
  EXPECT_NEAR(conduction(0.7, 0.7, Conduction::exponential), std::exp(-1.0), 1e-9);
  EXPECT_EQ(conduction(0.7, 0.7, Conduction::rational), 0.5);
}

TEST(Conduction, MonotoneNonIncreasing) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (int i = 0; i < 1000; ++i) {
    double a = u(rng), b = u(rng);
    if (a > b) std::swap(a, b);
    for (auto kind : {Conduction::exponential, Conduction::rational})
      ASSERT_GE(conduction(a, 0.1, kind), conduction(b, 0.1, kind));
  }
}

TEST(Diffusion, ParamsValidated) {
  EXPECT_ERROR_CODE((DiffusionParams{1, 0.3, 0.05}.validate()), ErrorCode::InvalidConfig);
  EXPECT_ERROR_CODE((DiffusionParams{1, 0.2, 0.0}.validate()), ErrorCode::InvalidConfig);
  EXPECT_ERROR_CODE((DiffusionParams{-1, 0.2, 0.05}.validate()), ErrorCode::InvalidConfig);
}

TEST(Diffusion, ConstantImageUnchanged) {
  const RealImage img(6, 4, 0.37);
  EXPECT_EQ(diffuse_step(img, {}), img);
}

TEST(Diffusion, ThreePixelStencil) {
  RealImage img(3, 1);
  img(1, 0) = 1.0;
  const DiffusionParams p{1, 0.25, 1e6};
  const RealImage out = diffuse_step(img, p);
  EXPECT_NEAR(out(0, 0), 0.25, 1e-9);
  EXPECT_NEAR(out(1, 0), 0.5, 1e-9);
  EXPECT_NEAR(out(2, 0), 0.25, 1e-9);
}

TEST(Diffusion, OneStepConservesSum) {
  const RealImage img = random_real(8, 8, 3);
  const RealImage out = diffuse_step(img, {1, 0.25, 0.1});
  EXPECT_NEAR(sum(out), sum(img), 1e-6 * sum(img));
}

TEST(Diffusion, ZeroIterationsReturnsInput) {
  GrayImage img(5, 5, 17);
  img(2, 2) = 200;
  EXPECT_EQ(anisotropic_diffuse(img, {0, 0.2, 0.05}), img);
}

TEST(Diffusion, NoiseVarianceNonIncreasing) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> noise(0.0, 0.03);
  RealImage img(48, 48);
  for (auto& v : img.data()) v = 0.5 + noise(rng);
  auto variance = [](const RealImage& im) {
    const double m = sum(im) / static_cast<double>(im.size());
    double s = 0.0;
    for (double v : im.data()) s += (v - m) * (v - m);
    return s / static_cast<double>(im.size());
  };
  const DiffusionParams p{1, 0.2, 0.1};
  double prev = variance(img);
  for (int i = 0; i < 20; ++i) {
    img = diffuse_step(img, p);
    const double v = variance(img);
    ASSERT_LE(v, prev) << "iteration " << i;
    prev = v;
  }
}

TEST(Diffusion, StepEdgeSurvivesWhereLinearBlurs) {
  const RealImage step = step_edge(16, 8);
  const DiffusionParams pm{20, 0.2, 0.1};
  const double kept = mid_contrast(anisotropic_diffuse(step, pm));
  // Conduction that never drops below 1 is plain linear diffusion.
  const DiffusionParams linear{20, 0.2, 1e12};
  const double blurred = mid_contrast(anisotropic_diffuse(step, linear));
  EXPECT_GE(kept, 0.8);
  EXPECT_LT(blurred, 0.8);
}

TEST(Diffusion, MaximumPrincipleAndConservationOverManySteps) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    RealImage img = random_real(16, 12, seed);
    const double lo = *std::min_element(img.data().begin(), img.data().end());
    const double hi = *std::max_element(img.data().begin(), img.data().end());
    const double total = sum(img);
    for (int i = 0; i < 50; ++i) {
      img = diffuse_step(img, {1, 0.25, 0.2, Conduction::rational});
      for (double v : img.data()) {
        ASSERT_GE(v, lo - 1e-12);
        ASSERT_LE(v, hi + 1e-12);
      }
    }
    EXPECT_NEAR(sum(img), total, 1e-6 * total);
  }
}
