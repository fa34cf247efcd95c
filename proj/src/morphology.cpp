#include "tornmend/morphology.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace tornmend {
namespace {

constexpr int kDx8[8] = {1, 1, 0, -1, -1, -1, 0, 1};
constexpr int kDy8[8] = {0, 1, 1, 1, 0, -1, -1, -1};
constexpr int kDx4[4] = {1, 0, -1, 0};
constexpr int kDy4[4] = {0, 1, 0, -1};

// 1-D squared distance transform of a sampled function (lower envelope of
// parabolas), Felzenszwalb & Huttenlocher.
void distance_1d(const std::vector<double>& f, std::vector<double>& out, std::vector<int>& v, std::vector<double>& z) {
  const int n = static_cast<int>(f.size());
  constexpr double inf = std::numeric_limits<double>::infinity();
  int k = -1;
  for (int q = 0; q < n; ++q) {
    if (f[q] == inf) continue;
    while (k >= 0) {
      const double s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2.0 * (q - v[k]));
      if (s <= z[k]) {
        --k;
      } else {
        break;
      }
    }
    ++k;
    v[k] = q;
    z[k] = k == 0 ? -inf : ((f[q] + q * q) - (f[v[k - 1]] + v[k - 1] * v[k - 1])) / (2.0 * (q - v[k - 1]));
    z[k + 1] = inf;
  }
  if (k < 0) {
    std::fill(out.begin(), out.end(), inf);
    return;
  }
  int j = 0;
  for (int q = 0; q < n; ++q) {
    while (z[j + 1] < q) ++j;
    const double d = q - v[j];
    out[q] = d * d + f[v[j]];
  }
}

}  // namespace

Components label_components(const BinaryMask& mask, Connectivity connectivity) {
  Components out{Grid<int>(mask.width(), mask.height(), 0), {0}};
  const int* dx = connectivity == Connectivity::eight ? kDx8 : kDx4;
  const int* dy = connectivity == Connectivity::eight ? kDy8 : kDy4;
  const int nn = connectivity == Connectivity::eight ? 8 : 4;
  std::vector<std::pair<int, int>> stack;
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask(x, y) || out.labels(x, y)) continue;
      const int label = static_cast<int>(out.sizes.size());
      std::size_t size = 0;
      out.labels(x, y) = label;
      stack.push_back({x, y});
      while (!stack.empty()) {
        auto [cx, cy] = stack.back();
        stack.pop_back();
        ++size;
        for (int k = 0; k < nn; ++k) {
          const int nx = cx + dx[k];
          const int ny = cy + dy[k];
          if (mask.contains(nx, ny) && mask(nx, ny) && !out.labels(nx, ny)) {
            out.labels(nx, ny) = label;
            stack.push_back({nx, ny});
          }
        }
      }
      out.sizes.push_back(size);
    }
  }
  return out;
}

BinaryMask largest_component(const BinaryMask& mask, Connectivity connectivity) {
  const auto comps = label_components(mask, connectivity);
  BinaryMask out(mask.width(), mask.height());
  if (comps.count() == 0) return out;
  int best = 1;
  for (int k = 2; k <= comps.count(); ++k)
    if (comps.sizes[k] > comps.sizes[best]) best = k;
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] = comps.labels.data()[i] == best ? 1 : 0;
  return out;
}

BinaryMask fill_holes(const BinaryMask& mask) {
  const int w = mask.width();
  const int h = mask.height();
  BinaryMask outside(w, h);
  std::deque<std::pair<int, int>> queue;
  auto seed = [&](int x, int y) {
    if (!mask(x, y) && !outside(x, y)) {
      outside(x, y) = 1;
      queue.push_back({x, y});
    }
  };
  for (int x = 0; x < w; ++x) {
    seed(x, 0);
    seed(x, h - 1);
  }
  for (int y = 0; y < h; ++y) {
    seed(0, y);
    seed(w - 1, y);
  }
  while (!queue.empty()) {
    auto [x, y] = queue.front();
    queue.pop_front();
    for (int k = 0; k < 4; ++k) {
      const int nx = x + kDx4[k];
      const int ny = y + kDy4[k];
      if (mask.contains(nx, ny)) seed(nx, ny);
    }
  }
  BinaryMask out(w, h);
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] = outside.data()[i] ? 0 : 1;
  return out;
}

RealImage distance_to(const BinaryMask& mask) {
  const int w = mask.width();
  const int h = mask.height();
  constexpr double inf = std::numeric_limits<double>::infinity();
  RealImage sq(w, h, inf);
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask.data()[i]) sq.data()[i] = 0.0;

  const int n = std::max(w, h);
  std::vector<double> f(n), d(n), z(n + 1);
  std::vector<int> v(n);
  f.resize(h);
  d.resize(h);
  for (int x = 0; x < w; ++x) {
    for (int y = 0; y < h; ++y) f[y] = sq(x, y);
    distance_1d(f, d, v, z);
    for (int y = 0; y < h; ++y) sq(x, y) = d[y];
  }
  f.resize(w);
  d.resize(w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) f[x] = sq(x, y);
    distance_1d(f, d, v, z);
    for (int x = 0; x < w; ++x) sq(x, y) = d[x];
  }
  for (auto& value : sq.data()) value = std::sqrt(value);
  return sq;
}

BinaryMask dilate(const BinaryMask& mask, double radius) {
  const auto dist = distance_to(mask);
  BinaryMask out(mask.width(), mask.height());
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] = dist.data()[i] <= radius ? 1 : 0;
  return out;
}

BinaryMask erode(const BinaryMask& mask, double radius) { return invert(dilate(invert(mask), radius)); }

BinaryMask invert(const BinaryMask& mask) {
  BinaryMask out(mask.width(), mask.height());
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] = mask.data()[i] ? 0 : 1;
  return out;
}

BinaryMask mask_and(const BinaryMask& a, const BinaryMask& b) {
  if (!a.same_shape(b)) throw Error(ErrorCode::InvalidArgument, "mask shapes differ");
  BinaryMask out(a.width(), a.height());
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] = (a.data()[i] && b.data()[i]) ? 1 : 0;
  return out;
}

BinaryMask mask_or(const BinaryMask& a, const BinaryMask& b) {
  if (!a.same_shape(b)) throw Error(ErrorCode::InvalidArgument, "mask shapes differ");
  BinaryMask out(a.width(), a.height());
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] = (a.data()[i] || b.data()[i]) ? 1 : 0;
  return out;
}

}  // namespace tornmend
