#include "tornmend/diffusion.hpp"

#include <cmath>

namespace tornmend {

void DiffusionParams::validate() const {
  if (iterations < 0) throw Error(ErrorCode::InvalidConfig, "diffusion.iterations must be >= 0");
  if (!(lambda > 0.0 && lambda <= 0.25)) throw Error(ErrorCode::InvalidConfig, "diffusion.lambda must be in (0, 0.25]");
  if (!(kappa > 0.0)) throw Error(ErrorCode::InvalidConfig, "diffusion.kappa must be > 0");
}

double conduction(double g, double kappa, Conduction kind) noexcept {
  const double r = g / kappa;
  return kind == Conduction::exponential ? std::exp(-r * r) : 1.0 / (1.0 + r * r);
}

RealImage diffuse_step(const RealImage& img, const DiffusionParams& params) {
  const int w = img.width();
  const int h = img.height();
  RealImage out(w, h);
  // Each flux term is evaluated with the same operands from both sides of an
  // edge, so what leaves one pixel arrives exactly at its neighbour.
  auto flux = [&](double from, double to) {
    const double diff = to - from;
    return conduction(std::abs(diff), params.kappa, params.conduction) * diff;
  };
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double c = img(x, y);
      double sum = 0.0;
      if (y > 0) sum += flux(c, img(x, y - 1));
      if (y + 1 < h) sum += flux(c, img(x, y + 1));
      if (x + 1 < w) sum += flux(c, img(x + 1, y));
      if (x > 0) sum += flux(c, img(x - 1, y));
      out(x, y) = c + params.lambda * sum;
    }
  }
  return out;
}

RealImage anisotropic_diffuse(const RealImage& img, const DiffusionParams& params) {
  params.validate();
  RealImage current = img;
  for (int i = 0; i < params.iterations; ++i) current = diffuse_step(current, params);
  return current;
}

GrayImage anisotropic_diffuse(const GrayImage& img, const DiffusionParams& params) {
  params.validate();
  if (params.iterations == 0) return img;
  return quantize(anisotropic_diffuse(to_unit(img), params));
}

}  // namespace tornmend
