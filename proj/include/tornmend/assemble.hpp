#pragma once

#include <string>
#include <vector>

#include "tornmend/fragment.hpp"
#include "tornmend/matching.hpp"
#include "tornmend/raster.hpp"

namespace tornmend {

struct Rect {
  int first_row = 0;
  int last_row = 0;
  int first_col = 0;
  int last_col = 0;

  int width() const noexcept { return last_col - first_col + 1; }
  int height() const noexcept { return last_row - first_row + 1; }
  friend bool operator==(const Rect&, const Rect&) = default;
};

/// First/last rows and columns holding foreground. Throws EmptyMask.
Rect bounding_box(const BinaryMask& mask);

/// Both fragments resampled onto one canvas. Canvas pixel (x, y) sits at
/// A-frame position origin + (x, y).
struct Canvas {
  Point origin;
  GrayImage layer_a;
  GrayImage layer_b;
  RealImage alpha_a;
  RealImage alpha_b;
  /// Canvas coordinates.
  Polyline seam;

  int width() const noexcept { return layer_a.width(); }
  int height() const noexcept { return layer_a.height(); }
};

/// Pastes A as is and B through `placement` (nearest-neighbour) onto the union
/// bounding box plus `margin`. `seam` is in A-frame coordinates. Throws
/// PlacementOutOfRange for translations beyond 4x the fragment extent.
Canvas place(const Fragment& a, const Fragment& b, const Placement& placement, const Polyline& seam, int margin = 2);

struct BlendParams {
  double feather = 3.0;
  /// Uncovered pixels within this distance of both fragments form the sliver mask.
  double max_gap = 8.0;

  void validate() const;
};

struct BlendResult {
  GrayImage image;
  /// Pixels covered by neither fragment (filled white).
  BinaryMask gap_mask;
  /// The part of gap_mask lying between the two fragments.
  BinaryMask sliver_mask;
};

/// Linear feathering across the seam within `feather` px; B wins overlaps
/// outside the band and everywhere when feather is 0.
BlendResult blend(const Canvas& canvas, const BlendParams& params = {});

/// Signed distance to an open polyline; the sign is positive on the side of
/// `positive_side`.
double signed_seam_distance(Point p, const Polyline& seam, Point positive_side);

/// Seam = midpoints of the n correspondences under the placement.
Polyline seam_polyline(const SideSegment& side_a, const SideSegment& side_b, const Placement& placement, int n);

/// Rounds the overall B -> A offset to whole pixels.
Placement snap_placement(const Placement& placement);

struct TextRefineParams {
  bool enabled = true;
  /// Glyph pitch of the monospaced text.
  int advance = 16;
  /// Shift window along the seam normal, in px (positive = away from A).
  int window_lo = -5;
  int window_hi = 10;
  int max_dy = 4;
  std::size_t min_ink = 50;
};

struct TextRefinement {
  bool applied = false;
  Point shift;
  std::string reason;
};

/// Re-registers B against A from the text itself: horizontal glyph phase
/// modulo the pitch and vertical line profile correlation. `normal` points
/// from A towards B across the seam.
TextRefinement refine_by_text(const Fragment& a, const Fragment& b, const Placement& placement, Point normal,
                              const TextRefineParams& params = {});

}  // namespace tornmend
