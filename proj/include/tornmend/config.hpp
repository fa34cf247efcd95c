#pragma once

#include <string>
#include <string_view>

#include "tornmend/assemble.hpp"
#include "tornmend/canny.hpp"
#include "tornmend/contour.hpp"
#include "tornmend/diffusion.hpp"
#include "tornmend/fragment.hpp"
#include "tornmend/matching.hpp"
#include "tornmend/orient.hpp"
#include "tornmend/repair.hpp"

namespace tornmend {

struct Config {
  DiffusionParams diffusion;
  SilhouetteParams silhouette;
  OrientParams orient;
  SimplifyParams simplify;
  ContourParams contour;
  CannyParams canny;
  MatchParams match;
  BlendParams blend;
  TextRefineParams text;
  RepairParams repair;

  /// Throws InvalidConfig (or InvalidThresholds) on the first bad value.
  void validate() const;
};

/// TOML; unknown sections or keys are rejected. Missing keys keep defaults.
Config parse_config(std::string_view toml_text);
Config load_config(const std::string& path);
std::string to_toml(const Config& config);

}  // namespace tornmend
