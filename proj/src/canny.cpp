#include "tornmend/canny.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <vector>

namespace tornmend {

void CannyParams::validate() const {
  if (!(sigma > 0.0)) throw Error(ErrorCode::InvalidConfig, "canny.sigma must be > 0");
  if (!(high_quantile > 0.0 && high_quantile < 1.0)) throw Error(ErrorCode::InvalidConfig, "canny.high_quantile out of range");
  if (!(low_ratio > 0.0 && low_ratio < 1.0)) throw Error(ErrorCode::InvalidConfig, "canny.low_ratio out of range");
  if (low.has_value() != high.has_value())
    throw Error(ErrorCode::InvalidConfig, "canny.low and canny.high must be given together");
  if (low && !(*low > 0.0 && *low < *high)) throw Error(ErrorCode::InvalidThresholds, "need 0 < low < high");
}

Kernel gaussian_kernel(double sigma) {
  if (!(sigma > 0.0)) throw Error(ErrorCode::InvalidArgument, "sigma must be > 0");
  const int r = static_cast<int>(std::ceil(3.0 * sigma));
  const int side = 2 * r + 1;
  Kernel k(side, side);
  double sum = 0.0;
  for (int j = -r; j <= r; ++j)
    for (int i = -r; i <= r; ++i) {
      const double v = std::exp(-(i * i + j * j) / (2.0 * sigma * sigma));
      k(i + r, j + r) = v;
      sum += v;
    }
  for (auto& v : k.data()) v /= sum;
  return k;
}

RealImage convolve(const RealImage& img, const Kernel& kernel) {
  if (kernel.width() % 2 == 0 || kernel.height() % 2 == 0)
    throw Error(ErrorCode::InvalidArgument, "kernel sides must be odd");
  const int rx = kernel.width() / 2;
  const int ry = kernel.height() / 2;
  RealImage out(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      double acc = 0.0;
      for (int j = -ry; j <= ry; ++j)
        for (int i = -rx; i <= rx; ++i) acc += kernel(i + rx, j + ry) * img.clamped(x - i, y - j);
      out(x, y) = acc;
    }
  }
  return out;
}

GradientField gradient(const RealImage& img, GradientNorm norm) {
  GradientField f{RealImage(img.width(), img.height()), Grid<std::uint8_t>(img.width(), img.height())};
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      auto p = [&](int dx, int dy) { return img.clamped(x + dx, y + dy); };
      const double gx = (p(1, -1) + 2 * p(1, 0) + p(1, 1)) - (p(-1, -1) + 2 * p(-1, 0) + p(-1, 1));
      const double gy = (p(-1, 1) + 2 * p(0, 1) + p(1, 1)) - (p(-1, -1) + 2 * p(0, -1) + p(1, -1));
      f.magnitude(x, y) = norm == GradientNorm::l2 ? std::sqrt(gx * gx + gy * gy) : std::abs(gx) + std::abs(gy);
      double deg = std::atan2(gy, gx) * 180.0 / std::numbers::pi;
      if (deg < 0) deg += 180.0;
      f.direction(x, y) = static_cast<std::uint8_t>(static_cast<int>(std::floor(deg / 45.0 + 0.5)) % 4);
    }
  }
  return f;
}

RealImage non_max_suppression(const GradientField& field) {
  static constexpr int dx[4] = {1, 1, 0, -1};
  static constexpr int dy[4] = {0, 1, 1, 1};
  const auto& m = field.magnitude;
  RealImage out(m.width(), m.height());
  auto at = [&](int x, int y) { return m.contains(x, y) ? m(x, y) : 0.0; };
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) {
      const int d = field.direction(x, y);
      const double v = m(x, y);
      if (v > at(x + dx[d], y + dy[d]) && v >= at(x - dx[d], y - dy[d])) out(x, y) = v;
    }
  }
  return out;
}

EdgeMap double_threshold(const RealImage& thin, double low, double high) {
  if (!(low > 0.0 && low < high)) throw Error(ErrorCode::InvalidThresholds, "need 0 < low < high");
  EdgeMap out{Grid<EdgeLabel>(thin.width(), thin.height(), EdgeLabel::none), BinaryMask(thin.width(), thin.height())};
  for (std::size_t i = 0; i < thin.size(); ++i) {
    const double v = thin.data()[i];
    const EdgeLabel label = v > high ? EdgeLabel::strong : (v < low ? EdgeLabel::none : EdgeLabel::weak);
    out.labels.data()[i] = label;
    out.edges.data()[i] = label != EdgeLabel::none ? 1 : 0;
  }
  return out;
}

EdgeMap hysteresis(const EdgeMap& labeled) {
  const auto& labels = labeled.labels;
  EdgeMap out{labels, BinaryMask(labels.width(), labels.height())};
  std::deque<std::pair<int, int>> queue;
  for (int y = 0; y < labels.height(); ++y)
    for (int x = 0; x < labels.width(); ++x)
      if (labels(x, y) == EdgeLabel::strong) {
        out.edges(x, y) = 1;
        queue.push_back({x, y});
      }
  while (!queue.empty()) {
    auto [x, y] = queue.front();
    queue.pop_front();
    for (int j = -1; j <= 1; ++j)
      for (int i = -1; i <= 1; ++i) {
        const int nx = x + i;
        const int ny = y + j;
        if (!labels.contains(nx, ny) || out.edges(nx, ny) || labels(nx, ny) == EdgeLabel::none) continue;
        out.edges(nx, ny) = 1;
        queue.push_back({nx, ny});
      }
  }
  return out;
}

Thresholds default_thresholds(const RealImage& thin, const CannyParams& params) {
  if (params.low && params.high) return {*params.low, *params.high, false};
  std::vector<double> survivors;
  for (double v : thin.data())
    if (v > 0.0) survivors.push_back(v);
  if (survivors.empty()) return {};
  const auto k = static_cast<std::size_t>(std::floor(params.high_quantile * static_cast<double>(survivors.size() - 1)));
  std::nth_element(survivors.begin(), survivors.begin() + static_cast<std::ptrdiff_t>(k), survivors.end());
  const double q = survivors[k];
  // Strong means > high; nudging below q lets the quantile value itself count.
  return {params.low_ratio * q, std::nextafter(q, 0.0), false};
}

EdgeMap canny(const RealImage& img, const CannyParams& params) {
  params.validate();
  const RealImage smooth = convolve(img, gaussian_kernel(params.sigma));
  const RealImage thin = non_max_suppression(gradient(smooth, params.norm));
  const Thresholds t = default_thresholds(thin, params);
  if (t.empty)
    return {Grid<EdgeLabel>(img.width(), img.height(), EdgeLabel::none), BinaryMask(img.width(), img.height())};
  return hysteresis(double_threshold(thin, t.low, t.high));
}

EdgeMap canny(const GrayImage& img, const CannyParams& params) { return canny(to_unit(img), params); }

}  // namespace tornmend
