#include "tornmend/fragment.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>

#include "tornmend/morphology.hpp"

namespace tornmend {

std::uint8_t border_median(const GrayImage& img) {
  std::vector<std::uint8_t> ring;
  const int w = img.width();
  const int h = img.height();
  for (int x = 0; x < w; ++x) {
    ring.push_back(img(x, 0));
    if (h > 1) ring.push_back(img(x, h - 1));
  }
  for (int y = 1; y + 1 < h; ++y) {
    ring.push_back(img(0, y));
    if (w > 1) ring.push_back(img(w - 1, y));
  }
  if (ring.empty()) return 0;
  auto mid = ring.begin() + static_cast<std::ptrdiff_t>(ring.size() / 2);
  std::nth_element(ring.begin(), mid, ring.end());
  return *mid;
}

Fragment make_fragment(GrayImage image, const SilhouetteParams& params) {
  if (image.empty()) throw Error(ErrorCode::EmptyMask, "empty image");
  const int w = image.width();
  const int h = image.height();
  const auto bin = binarize(image, Threshold::otsu());
  const std::uint8_t bg = border_median(image);

  auto background_like = [&](int x, int y) {
    const bool paper = params.invert ? !bin.mask(x, y) : bin.mask(x, y) != 0;
    return !paper && std::abs(static_cast<int>(image(x, y)) - bg) <= params.background_tolerance;
  };

  BinaryMask outside(w, h);
  std::deque<std::pair<int, int>> queue;
  auto visit = [&](int x, int y) {
    if (!outside(x, y) && background_like(x, y)) {
      outside(x, y) = 1;
      queue.push_back({x, y});
    }
  };
  for (int x = 0; x < w; ++x) {
    visit(x, 0);
    visit(x, h - 1);
  }
  for (int y = 0; y < h; ++y) {
    visit(0, y);
    visit(w - 1, y);
  }
  constexpr int dx[4] = {1, 0, -1, 0};
  constexpr int dy[4] = {0, 1, 0, -1};
  while (!queue.empty()) {
    auto [x, y] = queue.front();
    queue.pop_front();
    for (int k = 0; k < 4; ++k)
      if (image.contains(x + dx[k], y + dy[k])) visit(x + dx[k], y + dy[k]);
  }

  BinaryMask mask = fill_holes(largest_component(invert(outside)));
  if (!mask.any()) throw Error(ErrorCode::EmptyMask, "no paper region found");
  return Fragment{std::move(image), std::move(mask), Affine{}, bg};
}

}  // namespace tornmend
