#pragma once

#include <cstddef>
#include <vector>

#include "tornmend/raster.hpp"

namespace tornmend {

enum class Connectivity { four, eight };

struct Components {
  /// 0 = background, components numbered 1..n in raster order of first pixel.
  Grid<int> labels;
  /// sizes[k] = pixel count of component k; sizes[0] is unused.
  std::vector<std::size_t> sizes;

  int count() const noexcept { return static_cast<int>(sizes.size()) - 1; }
};

Components label_components(const BinaryMask& mask, Connectivity connectivity = Connectivity::eight);

/// Largest component; the earliest in raster order wins a size tie.
/// An empty mask yields an empty mask.
BinaryMask largest_component(const BinaryMask& mask, Connectivity connectivity = Connectivity::eight);

/// Background regions not 4-connected to the image border become foreground.
BinaryMask fill_holes(const BinaryMask& mask);

/// Euclidean distance from every pixel to the nearest foreground pixel
/// (0 on foreground, +inf everywhere when the mask is empty).
RealImage distance_to(const BinaryMask& mask);

/// Disk-shaped structuring element of the given radius.
BinaryMask dilate(const BinaryMask& mask, double radius);
BinaryMask erode(const BinaryMask& mask, double radius);

BinaryMask invert(const BinaryMask& mask);
BinaryMask mask_and(const BinaryMask& a, const BinaryMask& b);
BinaryMask mask_or(const BinaryMask& a, const BinaryMask& b);

}  // namespace tornmend
