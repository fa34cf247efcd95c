#pragma once

#include <cstdint>

#include "tornmend/raster.hpp"

namespace tornmend {

/// One torn piece: its intensities, its paper silhouette, and the transform
/// from the scan it came from to the current pixel grid.
struct Fragment {
  GrayImage image;
  BinaryMask mask;
  Affine frame;
  std::uint8_t background = 0;
};

struct SilhouetteParams {
  /// Paper darker than the scanner background.
  bool invert = false;
  /// Intensity distance from the border median still treated as background.
  int background_tolerance = 20;
};

/// Paper silhouette: everything not reachable from the image border through
/// background-coloured, non-paper pixels; largest component, holes filled.
/// Throws EmptyMask when nothing remains.
Fragment make_fragment(GrayImage image, const SilhouetteParams& params = {});

/// Median intensity over the outermost ring of pixels.
std::uint8_t border_median(const GrayImage& img);

}  // namespace tornmend
