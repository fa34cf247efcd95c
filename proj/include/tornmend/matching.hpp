#pragma once

#include <vector>

#include "tornmend/contour.hpp"
#include "tornmend/raster.hpp"

namespace tornmend {

/// Rigid placement of fragment B: rotate by `rotation` about `pivot`, then translate.
struct Placement {
  int rotation = 0;  // 0 or 180
  Point translation;
  Point pivot;

  Point apply(Point p) const noexcept;
  Affine affine() const noexcept;
  /// The placement undoing this one, expressed about `new_pivot`.
  Placement inverse(Point new_pivot) const noexcept;
};

struct DistanceProfile {
  std::vector<double> samples;
  double mean = 0.0;
  double variance = 0.0;  // population

  static DistanceProfile from_samples(std::vector<double> samples);
};

struct MatchParams {
  /// Accept iff variance <= tau^2.
  double tau = 1.5;
  int samples = 64;
  /// Target distance between facing samples; 1 = pixel-adjacent boundaries.
  double standoff = 1.0;
  double coarse_step = 4.0;
  /// Fraction of side samples that must be near a detected edge.
  double edge_support = 0.7;
  double edge_radius = 2.0;

  void validate() const;
};

struct MatchScore {
  int side_a = -1;
  int side_b = -1;
  Placement placement;
  double variance = 0.0;
  /// Mean squared deviation of the samples from the standoff.
  double objective = 0.0;
  bool accepted = false;
};

double euclidean_distance(Point p, Point q) noexcept;

/// n points at equal arc-length spacing, endpoints included. Throws ZeroLengthChain.
std::vector<Point> resample(const Polyline& chain, int n);

/// Distances between a_i and the placed, reversed b samples; negative where the
/// b sample lies on the inner side of a (a runs counter-clockwise as displayed).
DistanceProfile distance_profile(const std::vector<Point>& a, const std::vector<Point>& b, const Placement& placement);
DistanceProfile distance_profile(const SideSegment& side_a, const SideSegment& side_b, const Placement& placement,
                                 int n);

struct Alignment {
  Point translation;
  double variance = 0.0;
  double objective = 0.0;
};

/// Coarse-to-fine translation search (coarse_step, 1 px, 0.25 px) over a
/// window of `extent` around the centroid-matching offset, minimising the
/// standoff objective. Ties: lower objective, smaller |t|, then (dx, dy).
Alignment align_sides(const SideSegment& side_a, const SideSegment& side_b, int rotation, Point extent,
                      const MatchParams& params = {});

struct Selection {
  MatchScore best;
  std::vector<MatchScore> candidates;
};

/// Every non-uniform side of A against every non-uniform side of B under each
/// rotation; lowest variance wins. Throws NoCandidate if either side has none.
Selection select_pair(const std::vector<SideSegment>& sides_a, const std::vector<SideSegment>& sides_b,
                      const std::vector<int>& rotations, Point extent, const MatchParams& params = {});

/// Fraction of `points` within `radius` of an edge pixel.
double edge_support(const std::vector<Point>& points, const BinaryMask& edges, double radius);

}  // namespace tornmend
