#pragma once

#include <cstdint>
#include <vector>

#include "tornmend/fragment.hpp"
#include "tornmend/raster.hpp"

namespace tornmend {

struct OrientParams {
  double sweep_degrees = 45.0;
  double coarse_step = 0.5;
  double fine_step = 0.1;
  /// Estimates smaller than this in magnitude leave the fragment untouched.
  double deadband = 0.5;
  /// Minimum ink pixels as a fraction of the paper region.
  double min_ink_fraction = 0.01;
  /// Offer the 180-degree placement to the matcher.
  bool try_flip = true;

  void validate() const;
};

struct OrientationEstimate {
  double skew_degrees = 0.0;
  /// Rotations (degrees) for the matcher to try on fragment B.
  std::vector<int> flip_candidates{0, 180};
  double confidence = 0.0;
  bool no_text = false;
};

/// Dark pixels inside the paper region, ignoring a band along its edge.
BinaryMask ink_mask(const GrayImage& img, const BinaryMask& paper, double edge_band = 3.0);

struct SkewEstimate {
  double degrees = 0.0;
  double confidence = 0.0;
};

/// Projection-profile skew: the angle whose rotated horizontal profile of the
/// ink has the largest variance. Positive = text rotated counter-clockwise as
/// displayed. Throws NoText when ink covers too little of the mask.
SkewEstimate estimate_skew(const GrayImage& img, const BinaryMask& mask, const OrientParams& params = {});

/// Never throws NoText; reports it through `no_text` and a zero skew.
OrientationEstimate estimate_orientation(const GrayImage& img, const BinaryMask& mask,
                                         const OrientParams& params = {});

struct RotationFrame {
  Affine map;  // source -> destination pixel coordinates
  int width = 0;
  int height = 0;
};

/// Grown canvas that holds the whole source after rotation about its centre.
RotationFrame rotation_frame(int width, int height, double degrees);
GrayImage rotate_image(const GrayImage& img, const RotationFrame& frame, std::uint8_t fill);
BinaryMask rotate_mask(const BinaryMask& mask, const RotationFrame& frame);

/// Rotates a fragment by `degrees` and updates its frame.
Fragment rotate_fragment(const Fragment& fragment, double degrees);

struct NormalizedPair {
  Fragment a;
  Fragment b;
  std::vector<int> flip_candidates;
  OrientationEstimate estimate_a;
  OrientationEstimate estimate_b;
};

/// Deskews both fragments; the 180-degree ambiguity is left to the matcher.
NormalizedPair normalize_pair(Fragment a, Fragment b, const OrientParams& params = {});

}  // namespace tornmend
