#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "tornmend/raster.hpp"

namespace tornmend {

/// Fixed-cell bitmap font; glyph pixels are 1 for ink.
class GlyphAtlas {
 public:
  GlyphAtlas() = default;
  GlyphAtlas(std::string charset, std::vector<BinaryMask> glyphs, int cell_width, int cell_height, int baseline,
             int advance);

  /// Strip image (ink dark) plus manifest: "cell W H baseline B" then "<char> <offset> <advance>" lines.
  static GlyphAtlas load(const std::string& strip_path, const std::string& manifest_path);
  /// The atlas shipped in assets/.
  static const GlyphAtlas& bundled();

  const std::string& charset() const noexcept { return charset_; }
  bool has(char c) const noexcept { return charset_.find(c) != std::string::npos; }
  /// Throws InvalidArgument for characters outside the charset.
  const BinaryMask& glyph(char c) const;
  const std::vector<BinaryMask>& glyphs() const noexcept { return glyphs_; }

  int cell_width() const noexcept { return cell_width_; }
  int cell_height() const noexcept { return cell_height_; }
  int baseline() const noexcept { return baseline_; }
  int advance() const noexcept { return advance_; }

 private:
  std::string charset_;
  std::vector<BinaryMask> glyphs_;
  int cell_width_ = 0;
  int cell_height_ = 0;
  int baseline_ = 0;
  int advance_ = 0;
};

/// Lower-case word list, in file order.
class Dictionary {
 public:
  Dictionary() = default;
  explicit Dictionary(std::vector<std::string> words);

  static Dictionary load(const std::string& path);
  static const Dictionary& bundled();

  const std::vector<std::string>& words() const noexcept { return words_; }
  /// Case-insensitive; '?' matches any one character.
  std::vector<std::string> matches(std::string_view pattern) const;

 private:
  std::vector<std::string> words_;
};

struct CellBox {
  int x = 0;
  int y = 0;
  int width = 0;
  int height = 0;

  friend bool operator==(const CellBox&, const CellBox&) = default;
};

struct WordCandidate {
  std::vector<CellBox> cells;
  std::string text;
  int damaged_count = 0;
};

struct RepairParams {
  bool enabled = true;
  std::string atlas_path;       // empty = bundled
  std::string dictionary_path;  // empty = bundled
  /// A cell is damaged when the gap covers more than this fraction of it.
  double damage_fraction = 0.3;
  double min_score = 0.5;
  /// Search radius around the gap in cell heights.
  double reach_cells = 3.0;

  void validate() const;
};

/// Words on text lines near the gap with at least one '?' cell.
std::vector<WordCandidate> find_damaged_words(const GrayImage& image, const BinaryMask& gap, const GlyphAtlas& atlas,
                                              const RepairParams& params = {});

struct Recognition {
  char character = '?';
  double score = 0.0;
  bool low_confidence = true;
};

/// Normalised cross-correlation against every glyph after resizing the cell to the atlas cell.
Recognition recognize_glyph(const GrayImage& cell, const GlyphAtlas& atlas, double min_score = 0.5);

enum class CompletionStatus { unchanged, completed, no_completion, ambiguous };

struct Completion {
  CompletionStatus status = CompletionStatus::unchanged;
  std::string text;
  std::vector<std::string> hits;
};

Completion complete_word(const WordCandidate& candidate, const Dictionary& dictionary);

/// Draws the completed characters into the '?' cells; nothing else changes.
GrayImage render_repair(const GrayImage& image, const WordCandidate& candidate, const std::string& completed,
                        const GlyphAtlas& atlas);

struct RepairOutcome {
  WordCandidate candidate;
  Completion completion;
};

struct RepairResult {
  GrayImage image;
  std::vector<RepairOutcome> words;
};

RepairResult repair(const GrayImage& image, const BinaryMask& gap, const GlyphAtlas& atlas,
                    const Dictionary& dictionary, const RepairParams& params = {});

std::string_view to_string(CompletionStatus status);

}  // namespace tornmend
