#pragma once

#include <cstdint>
#include <optional>

#include "tornmend/raster.hpp"

namespace tornmend {

enum class GradientNorm { l2, l1 };

struct CannyParams {
  double sigma = 1.4;
  /// Absolute thresholds; when unset they come from the NMS survivors.
  std::optional<double> low;
  std::optional<double> high;
  double high_quantile = 0.85;
  double low_ratio = 0.4;
  GradientNorm norm = GradientNorm::l2;

  void validate() const;
};

using Kernel = Grid<double>;

/// Side 2*ceil(3 sigma)+1, entries proportional to exp(-(i^2+j^2)/(2 sigma^2)), sum 1.
Kernel gaussian_kernel(double sigma);

/// Replicated-edge convolution, output the size of the input.
RealImage convolve(const RealImage& img, const Kernel& kernel);

/// Directions: 0 = 0 deg, 1 = 45, 2 = 90, 3 = 135 (y grows downwards).
struct GradientField {
  RealImage magnitude;
  Grid<std::uint8_t> direction;
};

/// 3x3 Sobel derivatives.
GradientField gradient(const RealImage& img, GradientNorm norm = GradientNorm::l2);

/// Keeps a pixel iff it is > its forward and >= its backward neighbour along
/// its direction; outside neighbours count as 0.
RealImage non_max_suppression(const GradientField& field);

enum class EdgeLabel : std::uint8_t { none = 0, weak = 1, strong = 2 };

struct EdgeMap {
  Grid<EdgeLabel> labels;
  BinaryMask edges;
};

/// > high strong, < low none, otherwise weak. Throws InvalidThresholds unless 0 < low < high.
EdgeMap double_threshold(const RealImage& thin, double low, double high);

/// Strong pixels plus weak pixels 8-connected to a strong one through weak/strong pixels.
EdgeMap hysteresis(const EdgeMap& labeled);

struct Thresholds {
  double low = 0.0;
  double high = 0.0;
  bool empty = true;  // no positive survivor to derive them from
};

Thresholds default_thresholds(const RealImage& thin, const CannyParams& params);

EdgeMap canny(const RealImage& img, const CannyParams& params = {});
EdgeMap canny(const GrayImage& img, const CannyParams& params = {});

}  // namespace tornmend
