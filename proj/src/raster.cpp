#include "tornmend/raster.hpp"

#include <algorithm>
#include <array>
#include <numbers>
#include <numeric>

namespace tornmend {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedFile: return "MalformedFile";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::EmptyMask: return "EmptyMask";
    case ErrorCode::EmptyBoundary: return "EmptyBoundary";
    case ErrorCode::DegenerateBoundary: return "DegenerateBoundary";
    case ErrorCode::NoText: return "NoText";
    case ErrorCode::InvalidThresholds: return "InvalidThresholds";
    case ErrorCode::ZeroLengthChain: return "ZeroLengthChain";
    case ErrorCode::NoCandidate: return "NoCandidate";
    case ErrorCode::PlacementOutOfRange: return "PlacementOutOfRange";
    case ErrorCode::TextOverflow: return "TextOverflow";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

std::size_t BinaryMask::count() const noexcept {
  return static_cast<std::size_t>(std::count_if(data().begin(), data().end(), [](std::uint8_t v) { return v != 0; }));
}

RealImage to_unit(const GrayImage& img) {
  RealImage out(img.width(), img.height());
  std::transform(img.data().begin(), img.data().end(), out.data().begin(),
                 [](std::uint8_t v) { return static_cast<double>(v) / 255.0; });
  return out;
}

std::uint8_t quantize_value(double unit_value) noexcept {
  const double scaled = std::clamp(unit_value * 255.0, 0.0, 255.0);
  return static_cast<std::uint8_t>(std::round(scaled));  // std::round is half-away-from-zero
}

GrayImage quantize(const RealImage& img) {
  GrayImage out(img.width(), img.height());
  std::transform(img.data().begin(), img.data().end(), out.data().begin(), quantize_value);
  return out;
}

Affine Affine::rotation(double degrees, Point center) {
  const double r = degrees * std::numbers::pi / 180.0;
  const double cs = std::cos(r);
  const double sn = std::sin(r);
  Affine m{cs, sn, -sn, cs, 0.0, 0.0};
  const Point moved = m.apply_linear(center);
  m.tx = center.x - moved.x;
  m.ty = center.y - moved.y;
  return m;
}

Affine Affine::inverse() const {
  const double det = a * d - b * c;
  if (det == 0.0) throw Error(ErrorCode::InvalidArgument, "singular transform");
  Affine inv{d / det, -b / det, -c / det, a / det, 0.0, 0.0};
  const Point t = inv.apply_linear({tx, ty});
  inv.tx = -t.x;
  inv.ty = -t.y;
  return inv;
}

Affine Affine::operator*(const Affine& o) const noexcept {
  return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d,
          a * o.tx + b * o.ty + tx, c * o.tx + d * o.ty + ty};
}

double Polyline::length() const noexcept {
  double total = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) total += norm(points[i] - points[i - 1]);
  if (closed && points.size() > 1) total += norm(points.front() - points.back());
  return total;
}

Point Polyline::centroid() const noexcept {
  if (points.empty()) return {};
  Point sum{};
  for (const auto& p : points) sum = sum + p;
  return (1.0 / static_cast<double>(points.size())) * sum;
}

Histogram histogram(const GrayImage& img) {
  Histogram h{};
  for (auto v : img.data()) ++h[v];
  return h;
}

int otsu_threshold(const Histogram& hist, bool* degenerate) {
  const auto occupied = std::count_if(hist.begin(), hist.end(), [](std::uint64_t c) { return c > 0; });
  if (degenerate) *degenerate = occupied <= 1;
  if (occupied <= 1) return 256;

  std::int64_t total = 0;
  std::int64_t sum_all = 0;
  for (int i = 0; i < 256; ++i) {
    total += static_cast<std::int64_t>(hist[i]);
    sum_all += static_cast<std::int64_t>(i) * static_cast<std::int64_t>(hist[i]);
  }

  // Class 0 = [0, t), class 1 = [t, 255]. Between-class variance up to the
  // constant 1/n^2 is (w1*s0 - w0*s1)^2 / (w0*w1); counts stay integral so
  // equal scores compare equal.
  std::int64_t w0 = 0;
  std::int64_t s0 = 0;
  double best = -1.0;
  int best_t = 0;
  for (int t = 0; t < 256; ++t) {
    if (t > 0) {
      w0 += static_cast<std::int64_t>(hist[t - 1]);
      s0 += static_cast<std::int64_t>(t - 1) * static_cast<std::int64_t>(hist[t - 1]);
    }
    const std::int64_t w1 = total - w0;
    double score = 0.0;
    if (w0 > 0 && w1 > 0) {
      const double diff = static_cast<double>(w1 * s0 - w0 * (sum_all - s0));
      score = diff * diff / (static_cast<double>(w0) * static_cast<double>(w1));
    }
    if (score > best) {
      best = score;
      best_t = t;
    }
  }
  return best_t;
}

Binarization binarize(const GrayImage& img, Threshold method) {
  Binarization out;
  if (method.kind == Threshold::Kind::otsu) {
    out.threshold = otsu_threshold(histogram(img), &out.degenerate);
  } else {
    out.threshold = method.value;
    const auto h = histogram(img);
    out.degenerate = std::count_if(h.begin(), h.end(), [](std::uint64_t c) { return c > 0; }) <= 1;
  }
  out.mask = BinaryMask(img.width(), img.height());
  std::transform(img.data().begin(), img.data().end(), out.mask.data().begin(),
                 [t = out.threshold](std::uint8_t v) { return static_cast<std::uint8_t>(v >= t ? 1 : 0); });
  return out;
}

}  // namespace tornmend
