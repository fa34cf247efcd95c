#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tornmend/config.hpp"

namespace tornmend {

struct StageTiming {
  std::string stage;
  double ms = 0.0;
};

struct ReconstructionResult {
  bool accepted = false;
  /// Why the pair was not stitched; empty when accepted.
  std::string reason;

  std::optional<GrayImage> image;
  /// Canvas pixels covered by neither fragment.
  BinaryMask gap_mask;
  /// The part of gap_mask between the fragments (the lost sliver).
  BinaryMask sliver_mask;

  MatchScore match;
  std::vector<MatchScore> candidates;
  /// Final B -> A placement in the normalised frames (snapped, text-refined).
  Placement placement;
  TextRefinement refinement;

  /// Scan coordinates -> normalised fragment coordinates.
  Affine frame_a;
  Affine frame_b;
  /// Canvas pixel (0, 0) in normalised A coordinates.
  Point origin;

  /// Matched chains in normalised coordinates.
  Polyline side_a;
  Polyline side_b;
  bool inner_a = false;
  bool inner_b = false;
  double edge_support_a = 0.0;
  double edge_support_b = 0.0;
  OrientationEstimate orient_a;
  OrientationEstimate orient_b;

  std::size_t gap_pixels = 0;
  std::vector<RepairOutcome> repairs;
  std::vector<StageTiming> timings;
};

/// Full pipeline: diffuse, silhouette, orient, boundaries, sides, edges,
/// pair selection, placement, blending, repair. A pair that does not match
/// comes back with accepted = false and no image.
ReconstructionResult stitch(const GrayImage& a, const GrayImage& b, const Config& config = {});

}  // namespace tornmend
