#pragma once

#include "tornmend/raster.hpp"

namespace tornmend {

enum class Conduction { exponential, rational };

struct DiffusionParams {
  int iterations = 15;
  double lambda = 0.2;
  /// Contrast scale K on the unit intensity scale.
  double kappa = 0.05;
  Conduction conduction = Conduction::exponential;

  /// Throws InvalidConfig unless iterations >= 0, 0 < lambda <= 0.25, kappa > 0.
  void validate() const;
};

/// exp(-(g/K)^2) or 1 / (1 + (g/K)^2).
double conduction(double g, double kappa, Conduction kind) noexcept;

/// One explicit 4-neighbour update with replicated (Neumann) borders.
RealImage diffuse_step(const RealImage& img, const DiffusionParams& params);

RealImage anisotropic_diffuse(const RealImage& img, const DiffusionParams& params);
GrayImage anisotropic_diffuse(const GrayImage& img, const DiffusionParams& params);

}  // namespace tornmend
