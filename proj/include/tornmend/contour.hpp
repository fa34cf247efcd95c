#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "tornmend/raster.hpp"

namespace tornmend {

struct BoundarySet {
  Polyline outer;
  std::optional<Polyline> inner;

  /// The chain matching should use: inner when present.
  const Polyline& matching() const noexcept { return inner ? *inner : outer; }
};

enum class SideClass { uniform, non_uniform };

struct SideSegment {
  Polyline chain;
  SideClass classification = SideClass::uniform;
  int fragment_id = 0;
  int side_index = 0;
  /// Index range [first, last] into the closed boundary, wrapping past the end.
  std::size_t first = 0;
  std::size_t last = 0;
};

struct SimplifyParams {
  double tolerance = 2.0;
  /// Corners come from simplifying at corner_factor * tolerance.
  double corner_factor = 3.0;
  double corner_angle = 120.0;

  void validate() const;
};

struct ContourParams {
  /// Mean intensity within rim_band px of the outer edge below this means a
  /// dark rim, and the inner boundary is extracted.
  double rim_threshold = 160.0;
  double rim_band = 3.0;
};

/// Moore-neighbour trace of the largest 8-connected component: pixel centres,
/// counter-clockwise as displayed, starting at the top-most then left-most
/// pixel. Throws EmptyMask, or EmptyBoundary for components under 4 pixels.
Polyline trace_boundary(const BinaryMask& mask);

BoundarySet extract_boundaries(const GrayImage& img, const BinaryMask& mask, const ContourParams& params = {});

double point_segment_distance(Point p, Point a, Point b) noexcept;

/// Sorted indices of the vertices kept by Douglas-Peucker at `tolerance`
/// (vertex kept iff its distance is strictly greater). Closed lines are cut
/// at their two mutually farthest vertices.
std::vector<std::size_t> simplify_dp_indices(const Polyline& line, double tolerance);
Polyline simplify_dp(const Polyline& line, double tolerance);

/// Largest distance of any vertex from the first-last chord.
double chord_deviation(const Polyline& chain) noexcept;

std::vector<SideSegment> split_sides(const Polyline& boundary, const SimplifyParams& params = {},
                                     int fragment_id = 0);

/// Closed polygon signed area; positive for counter-clockwise as displayed.
double signed_area(const Polyline& ring) noexcept;

bool point_in_polygon(Point p, const Polyline& ring) noexcept;

/// One SVG path element per side.
std::string sides_to_svg(const std::vector<SideSegment>& sides, int width, int height);

}  // namespace tornmend
