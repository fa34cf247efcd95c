#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "tornmend/pipeline.hpp"
#include "tornmend/raster.hpp"
#include "tornmend/repair.hpp"

namespace tornmend {

/// Deterministic across platforms: the standard distributions are not.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  /// [0, 1)
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// [0, n)
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }
  double normal();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

struct TextLayout {
  int margin_x = 32;
  int margin_top = 28;
  int margin_bottom = 16;
  int line_pitch = 30;
};

/// A rendered word; (x, y) is the top-left of its first cell in page coordinates.
struct PlacedWord {
  std::string text;
  int x = 0;
  int y = 0;
};

/// Black monospaced text on a white page, word-wrapped. Throws TextOverflow.
GrayImage render_document(const std::string& text, const GlyphAtlas& atlas, int width, int height,
                          std::vector<PlacedWord>* words = nullptr, const TextLayout& layout = {});

struct Document {
  GrayImage page;
  std::string text;
  std::vector<PlacedWord> words;
};

/// A page filled with seeded random dictionary words.
Document make_document(std::uint64_t seed, const Dictionary& dictionary, const GlyphAtlas& atlas, int width = 640,
                       int height = 440, const TextLayout& layout = {});

struct TearSpec {
  enum class Kind { straight, polyline };
  Kind kind = Kind::straight;
  int teeth = 3;
  double amplitude = 20.0;
  double gap_width = 0.0;
  double noise_sigma = 0.0;
  bool flip_b = false;
  Point displace_b;
  std::uint64_t seed = 0;
  /// Seed of the page text; defaults to `seed`.
  std::optional<std::uint64_t> document;
  /// Fibre jitter of straight tears, px.
  double roughness = 3.0;
  /// Dark scan rim along each fragment edge, px (0 = none).
  int rim_width = 0;
  /// Both scans rotated by this much.
  double skew_degrees = 0.0;

  std::uint64_t document_seed() const noexcept { return document.value_or(seed); }
  /// Throws InvalidSpec.
  void validate(int page_width) const;
};

struct HarnessGeometry {
  int page_width = 640;
  int page_height = 440;
  int canvas_width = 800;
  int canvas_height = 600;
  int margin_x = 80;
  int margin_y = 80;
  std::uint8_t background = 40;
  std::uint8_t rim_intensity = 100;
};

struct GroundTruth {
  /// Tear path, page coordinates, monotone in y.
  Polyline tear;
  double gap_width = 0.0;
  bool flip_b = false;
  int page_width = 0;
  int page_height = 0;
  /// Page coordinates -> scan coordinates of each fragment.
  Affine page_to_a;
  Affine page_to_b;
  std::vector<PlacedWord> words;

  /// Scan B -> scan A.
  Affine b_to_a() const { return page_to_a * page_to_b.inverse(); }
};

struct TornPair {
  GrayImage a;
  GrayImage b;
  GroundTruth truth;
  /// Page partition: 1 = fragment A, 2 = fragment B, 0 = lost sliver.
  Grid<std::uint8_t> owner;
};

/// Signed horizontal position of the tear at row y.
double tear_x(const Polyline& tear, double y);
/// Euclidean distance to the tear path.
double tear_distance(const Polyline& tear, Point p);

TornPair generate_pair(const GrayImage& page, const TearSpec& spec, const HarnessGeometry& geometry = {});

struct RepairTally {
  int correct = 0;
  int ambiguous = 0;
  int failed = 0;
};

struct EvalReport {
  bool reconstructed = false;
  bool accepted = false;
  bool match_correct = false;
  double placement_error = -1.0;
  /// Binary agreement over all scored pixels.
  double pixel_agreement = 0.0;
  /// Ink intersection over union.
  double ink_agreement = 0.0;
  double ink_recall = 0.0;
  double ink_precision = 0.0;
  Point alignment;
  RepairTally repaired;
  std::vector<StageTiming> timings;
};

struct EvalParams {
  int search = 8;
  double seam_band = 5.0;
  /// Chosen sides must lie within gap/2 + this of the true tear (median).
  double side_tolerance = 3.0;
};

EvalReport evaluate(const ReconstructionResult& result, const GroundTruth& truth, const GrayImage& original,
                    const EvalParams& params = {});

/// Compare an image already registered to the page (no fragment frames).
EvalReport evaluate_image(const GrayImage& aligned, const GroundTruth& truth, const GrayImage& original,
                          const EvalParams& params = {});

}  // namespace tornmend
