#include "tornmend/orient.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tornmend/morphology.hpp"

namespace tornmend {
namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

struct InkPoints {
  std::vector<double> x;
  std::vector<double> y;
};

// Sum of squared bin counts of the projection y' = x sin(t) + y cos(t); for a
// fixed bin range this orders angles exactly as the profile variance does.
double profile_energy(const InkPoints& pts, double degrees, double offset, std::vector<std::uint32_t>& bins) {
  const double s = std::sin(degrees * kDeg);
  const double c = std::cos(degrees * kDeg);
  std::fill(bins.begin(), bins.end(), 0u);
  for (std::size_t i = 0; i < pts.x.size(); ++i) {
    const auto bin = static_cast<std::size_t>(std::floor(pts.x[i] * s + pts.y[i] * c + offset + 0.5));
    ++bins[bin];
  }
  double energy = 0.0;
  for (auto count : bins) energy += static_cast<double>(count) * count;
  return energy;
}

bool better(double score, double degrees, double best_score, double best_degrees) {
  if (score != best_score) return score > best_score;
  if (std::abs(degrees) != std::abs(best_degrees)) return std::abs(degrees) < std::abs(best_degrees);
  return degrees < best_degrees;
}

}  // namespace

void OrientParams::validate() const {
  if (!(sweep_degrees > 0.0 && sweep_degrees <= 90.0)) throw Error(ErrorCode::InvalidConfig, "orient.sweep out of range");
  if (!(coarse_step > 0.0) || !(fine_step > 0.0)) throw Error(ErrorCode::InvalidConfig, "orient steps must be > 0");
  if (deadband < 0.0) throw Error(ErrorCode::InvalidConfig, "orient.deadband must be >= 0");
  if (!(min_ink_fraction >= 0.0 && min_ink_fraction < 1.0))
    throw Error(ErrorCode::InvalidConfig, "orient.min_ink_fraction out of range");
}

BinaryMask ink_mask(const GrayImage& img, const BinaryMask& paper, double edge_band) {
  if (!img.same_shape(paper)) throw Error(ErrorCode::InvalidArgument, "image and mask shapes differ");
  const auto to_edge = distance_to(invert(paper));
  Histogram hist{};
  for (std::size_t i = 0; i < img.size(); ++i)
    if (to_edge.data()[i] > edge_band) ++hist[img.data()[i]];

  BinaryMask ink(img.width(), img.height());
  bool degenerate = false;
  const int t = otsu_threshold(hist, &degenerate);
  if (degenerate) return ink;
  // Two classes that are both paper (noise split) are not ink.
  double lo_sum = 0, lo_n = 0, hi_sum = 0, hi_n = 0;
  for (int v = 0; v < 256; ++v) {
    if (v < t) {
      lo_sum += static_cast<double>(v) * hist[v];
      lo_n += hist[v];
    } else {
      hi_sum += static_cast<double>(v) * hist[v];
      hi_n += hist[v];
    }
  }
  if (lo_n == 0 || hi_n == 0 || hi_sum / hi_n - lo_sum / lo_n < 64.0) return ink;
  for (std::size_t i = 0; i < img.size(); ++i)
    ink.data()[i] = (to_edge.data()[i] > edge_band && img.data()[i] < t) ? 1 : 0;
  return ink;
}

SkewEstimate estimate_skew(const GrayImage& img, const BinaryMask& mask, const OrientParams& params) {
  params.validate();
  const auto ink = ink_mask(img, mask);
  const std::size_t area = mask.count();
  const std::size_t ink_count = ink.count();
  if (area == 0 || ink_count == 0 || static_cast<double>(ink_count) < params.min_ink_fraction * static_cast<double>(area))
    throw Error(ErrorCode::NoText, "too little ink to judge orientation");

  InkPoints pts;
  pts.x.reserve(ink_count);
  pts.y.reserve(ink_count);
  for (int y = 0; y < ink.height(); ++y)
    for (int x = 0; x < ink.width(); ++x)
      if (ink(x, y)) {
        pts.x.push_back(x);
        pts.y.push_back(y);
      }
  const double diag = std::hypot(img.width(), img.height());
  std::vector<std::uint32_t> bins(static_cast<std::size_t>(2 * std::ceil(diag) + 4));
  const double offset = std::ceil(diag) + 1.0;

  std::vector<double> coarse_scores;
  double best = -1.0;
  double best_deg = 0.0;
  const int steps = static_cast<int>(std::floor(params.sweep_degrees / params.coarse_step + 1e-9));
  for (int i = -steps; i <= steps; ++i) {
    const double deg = i * params.coarse_step;
    const double score = profile_energy(pts, deg, offset, bins);
    coarse_scores.push_back(score);
    if (better(score, deg, best, best_deg)) {
      best = score;
      best_deg = deg;
    }
  }
  const double coarse_best = best_deg;
  const int fine = static_cast<int>(std::floor(params.coarse_step / params.fine_step + 1e-9));
  for (int j = -fine; j <= fine; ++j) {
    const double deg = std::round((coarse_best + j * params.fine_step) * 1e6) / 1e6;
    if (j == 0 || std::abs(deg) > params.sweep_degrees) continue;
    const double score = profile_energy(pts, deg, offset, bins);
    if (better(score, deg, best, best_deg)) {
      best = score;
      best_deg = deg;
    }
  }

  std::nth_element(coarse_scores.begin(), coarse_scores.begin() + coarse_scores.size() / 2, coarse_scores.end());
  const double median = coarse_scores[coarse_scores.size() / 2];
  return {best_deg, best > 0.0 ? std::clamp((best - median) / best, 0.0, 1.0) : 0.0};
}

OrientationEstimate estimate_orientation(const GrayImage& img, const BinaryMask& mask, const OrientParams& params) {
  OrientationEstimate out;
  out.flip_candidates = params.try_flip ? std::vector<int>{0, 180} : std::vector<int>{0};
  try {
    const auto skew = estimate_skew(img, mask, params);
    out.skew_degrees = skew.degrees;
    out.confidence = skew.confidence;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoText) throw;
    out.no_text = true;
    out.flip_candidates = {0, 180};
  }
  return out;
}

RotationFrame rotation_frame(int width, int height, double degrees) {
  const Point center{(width - 1) / 2.0, (height - 1) / 2.0};
  Affine map = Affine::rotation(degrees, center);
  double min_x = 1e300, min_y = 1e300, max_x = -1e300, max_y = -1e300;
  for (Point corner : {Point{-0.5, -0.5}, Point{width - 0.5, -0.5}, Point{-0.5, height - 0.5},
                       Point{width - 0.5, height - 0.5}}) {
    const Point p = map.apply(corner);
    min_x = std::min(min_x, p.x);
    min_y = std::min(min_y, p.y);
    max_x = std::max(max_x, p.x);
    max_y = std::max(max_y, p.y);
  }
  const int w = std::max(1, static_cast<int>(std::ceil(max_x - min_x - 1e-6)));
  const int h = std::max(1, static_cast<int>(std::ceil(max_y - min_y - 1e-6)));
  // Keep the centre at the centre of the grown canvas.
  const Point moved = map.apply(center);
  map.tx += (w - 1) / 2.0 - moved.x;
  map.ty += (h - 1) / 2.0 - moved.y;
  return {map, w, h};
}

GrayImage rotate_image(const GrayImage& img, const RotationFrame& frame, std::uint8_t fill) {
  const Affine inv = frame.map.inverse();
  GrayImage out(frame.width, frame.height, fill);
  auto tap = [&](int x, int y) -> double { return img.contains(x, y) ? img(x, y) : fill; };
  for (int y = 0; y < frame.height; ++y) {
    for (int x = 0; x < frame.width; ++x) {
      const Point s = inv.apply({static_cast<double>(x), static_cast<double>(y)});
      const double fx = std::floor(s.x);
      const double fy = std::floor(s.y);
      const int x0 = static_cast<int>(fx);
      const int y0 = static_cast<int>(fy);
      if (x0 < -1 || y0 < -1 || x0 >= img.width() || y0 >= img.height()) continue;
      const double ax = s.x - fx;
      const double ay = s.y - fy;
      const double v = (1 - ax) * (1 - ay) * tap(x0, y0) + ax * (1 - ay) * tap(x0 + 1, y0) +
                       (1 - ax) * ay * tap(x0, y0 + 1) + ax * ay * tap(x0 + 1, y0 + 1);
      out(x, y) = static_cast<std::uint8_t>(std::clamp(std::round(v), 0.0, 255.0));
    }
  }
  return out;
}

BinaryMask rotate_mask(const BinaryMask& mask, const RotationFrame& frame) {
  const Affine inv = frame.map.inverse();
  BinaryMask out(frame.width, frame.height);
  for (int y = 0; y < frame.height; ++y) {
    for (int x = 0; x < frame.width; ++x) {
      const Point s = inv.apply({static_cast<double>(x), static_cast<double>(y)});
      const int sx = static_cast<int>(std::floor(s.x + 0.5));
      const int sy = static_cast<int>(std::floor(s.y + 0.5));
      if (mask.contains(sx, sy)) out(x, y) = mask(sx, sy);
    }
  }
  return out;
}

Fragment rotate_fragment(const Fragment& fragment, double degrees) {
  const auto frame = rotation_frame(fragment.image.width(), fragment.image.height(), degrees);
  return Fragment{rotate_image(fragment.image, frame, fragment.background), rotate_mask(fragment.mask, frame),
                  frame.map * fragment.frame, fragment.background};
}

NormalizedPair normalize_pair(Fragment a, Fragment b, const OrientParams& params) {
  NormalizedPair out;
  out.estimate_a = estimate_orientation(a.image, a.mask, params);
  out.estimate_b = estimate_orientation(b.image, b.mask, params);
  auto level = [&](Fragment f, const OrientationEstimate& e) {
    if (e.no_text || std::abs(e.skew_degrees) < params.deadband) return f;
    return rotate_fragment(f, -e.skew_degrees);
  };
  out.a = level(std::move(a), out.estimate_a);
  out.b = level(std::move(b), out.estimate_b);
  const bool widen = out.estimate_a.no_text || out.estimate_b.no_text || params.try_flip;
  out.flip_candidates = widen ? std::vector<int>{0, 180} : std::vector<int>{0};
  return out;
}

}  // namespace tornmend
