#include "tornmend/repair.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "tornmend/morphology.hpp"

namespace tornmend {
namespace {

GrayImage crop(const GrayImage& image, const CellBox& box) {
  GrayImage out(box.width, box.height, 255);
  for (int y = 0; y < box.height; ++y)
    for (int x = 0; x < box.width; ++x)
      if (image.contains(box.x + x, box.y + y)) out(x, y) = image(box.x + x, box.y + y);
  return out;
}

double ncc(const std::vector<double>& f, const BinaryMask& g) {
  const double n = static_cast<double>(f.size());
  double mf = 0.0, mg = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    mf += f[i];
    mg += g.data()[i];
  }
  mf /= n;
  mg /= n;
  double sfg = 0.0, sff = 0.0, sgg = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double a = f[i] - mf;
    const double b = g.data()[i] - mg;
    sfg += a * b;
    sff += a * a;
    sgg += b * b;
  }
  if (sff <= 0.0 || sgg <= 0.0) return 0.0;
  return sfg / std::sqrt(sff * sgg);
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

struct LineCells {
  int origin_x = 0;
  int top = 0;
};

}  // namespace

GlyphAtlas::GlyphAtlas(std::string charset, std::vector<BinaryMask> glyphs, int cell_width, int cell_height,
                       int baseline, int advance)
    : charset_(std::move(charset)),
      glyphs_(std::move(glyphs)),
      cell_width_(cell_width),
      cell_height_(cell_height),
      baseline_(baseline),
      advance_(advance) {
  if (charset_.size() != glyphs_.size()) throw Error(ErrorCode::InvalidArgument, "one glyph per character expected");
  if (cell_width_ <= 0 || cell_height_ <= 0 || advance_ <= 0)
    throw Error(ErrorCode::InvalidArgument, "atlas cell dimensions must be positive");
  for (const auto& g : glyphs_)
    if (g.width() != cell_width_ || g.height() != cell_height_)
      throw Error(ErrorCode::InvalidArgument, "all glyphs must share the cell size");
  for (std::size_t i = 0; i < charset_.size(); ++i)
    if (charset_.find(charset_[i]) != i) throw Error(ErrorCode::InvalidArgument, "duplicate atlas character");
}

GlyphAtlas GlyphAtlas::load(const std::string& strip_path, const std::string& manifest_path) {
  const GrayImage strip = read_image(strip_path);
  std::ifstream in(manifest_path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + manifest_path);
  std::string word;
  int cw = 0, ch = 0, baseline = 0;
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::MalformedFile, "empty atlas manifest");
  {
    std::istringstream head(line);
    std::string base_word;
    if (!(head >> word >> cw >> ch >> base_word >> baseline) || word != "cell" || base_word != "baseline")
      throw Error(ErrorCode::MalformedFile, "atlas manifest header must be 'cell W H baseline B'");
  }
  std::string charset;
  std::vector<BinaryMask> glyphs;
  int advance = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    char c = 0;
    int offset = 0, adv = 0;
    if (!(row >> c >> offset >> adv)) throw Error(ErrorCode::MalformedFile, "bad atlas line: " + line);
    if (offset < 0 || offset + cw > strip.width() || ch > strip.height())
      throw Error(ErrorCode::MalformedFile, "atlas glyph outside the strip: " + line);
    BinaryMask g(cw, ch);
    for (int y = 0; y < ch; ++y)
      for (int x = 0; x < cw; ++x) g(x, y) = strip(offset + x, y) < 128 ? 1 : 0;
    charset.push_back(c);
    glyphs.push_back(std::move(g));
    advance = adv;
  }
  return GlyphAtlas(std::move(charset), std::move(glyphs), cw, ch, baseline, advance);
}

const GlyphAtlas& GlyphAtlas::bundled() {
  static const GlyphAtlas atlas =
      load(std::string(TORNMEND_ASSET_DIR) + "/glyphs.pgm", std::string(TORNMEND_ASSET_DIR) + "/glyphs.txt");
  return atlas;
}

const BinaryMask& GlyphAtlas::glyph(char c) const {
  const auto i = charset_.find(c);
  if (i == std::string::npos) throw Error(ErrorCode::InvalidArgument, std::string("no glyph for '") + c + "'");
  return glyphs_[i];
}

Dictionary::Dictionary(std::vector<std::string> words) : words_(std::move(words)) {
  for (auto& w : words_) w = lower(w);
}

Dictionary Dictionary::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.pop_back();
    if (!line.empty()) words.push_back(line);
  }
  return Dictionary(std::move(words));
}

const Dictionary& Dictionary::bundled() {
  static const Dictionary dict = load(std::string(TORNMEND_ASSET_DIR) + "/words.txt");
  return dict;
}

std::vector<std::string> Dictionary::matches(std::string_view pattern) const {
  const std::string p = lower(pattern);
  std::vector<std::string> hits;
  for (const auto& w : words_) {
    if (w.size() != p.size()) continue;
    bool ok = true;
    for (std::size_t i = 0; i < p.size() && ok; ++i) ok = p[i] == '?' || p[i] == w[i];
    if (ok) hits.push_back(w);
  }
  return hits;
}

void RepairParams::validate() const {
  if (!(damage_fraction > 0.0 && damage_fraction < 1.0)) throw Error(ErrorCode::InvalidConfig, "repair.damage_fraction out of range");
  if (!(min_score > -1.0 && min_score < 1.0)) throw Error(ErrorCode::InvalidConfig, "repair.min_score out of range");
  if (!(reach_cells > 0.0)) throw Error(ErrorCode::InvalidConfig, "repair.reach_cells must be > 0");
}

Recognition recognize_glyph(const GrayImage& cell, const GlyphAtlas& atlas, double min_score) {
  if (cell.empty()) throw Error(ErrorCode::InvalidArgument, "empty cell");
  const int cw = atlas.cell_width();
  const int ch = atlas.cell_height();
  std::vector<double> f(static_cast<std::size_t>(cw) * ch);
  for (int y = 0; y < ch; ++y)
    for (int x = 0; x < cw; ++x) {
      const int sx = std::min(cell.width() - 1, x * cell.width() / cw);
      const int sy = std::min(cell.height() - 1, y * cell.height() / ch);
      f[static_cast<std::size_t>(y) * cw + x] = 1.0 - cell(sx, sy) / 255.0;
    }
  Recognition best;
  best.score = -2.0;
  for (std::size_t i = 0; i < atlas.glyphs().size(); ++i) {
    const double s = ncc(f, atlas.glyphs()[i]);
    if (s > best.score) {
      best.score = s;
      best.character = atlas.charset()[i];
    }
  }
  best.low_confidence = best.score < min_score;
  return best;
}

std::vector<WordCandidate> find_damaged_words(const GrayImage& image, const BinaryMask& gap, const GlyphAtlas& atlas,
                                              const RepairParams& params) {
  params.validate();
  if (!image.same_shape(gap)) throw Error(ErrorCode::InvalidArgument, "image and gap mask shapes differ");
  std::vector<WordCandidate> out;
  if (!gap.any()) return out;

  const int w = image.width();
  const int h = image.height();
  const int cw = atlas.cell_width();
  const int ch = atlas.cell_height();
  const int adv = atlas.advance();
  const double reach = params.reach_cells * ch;
  const auto to_gap = distance_to(gap);
  auto ink = [&](int x, int y) { return image(x, y) < 128 && !gap(x, y); };

  // Text line bands near the gap.
  std::vector<char> row_near(h, 0), row_any(h, 0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (ink(x, y)) {
        row_any[y] = 1;
        if (to_gap(x, y) <= reach) row_near[y] = 1;
      }
  std::vector<std::pair<int, int>> bands;
  for (int y = 0; y < h;) {
    if (!row_any[y]) {
      ++y;
      continue;
    }
    int end = y;
    while (end + 1 < h && (row_any[end + 1] || (end + 2 < h && row_any[end + 2]) || (end + 3 < h && row_any[end + 3])))
      ++end;
    bool near = false;
    for (int r = y; r <= end; ++r) near = near || row_near[r];
    if (near) bands.push_back({y, end});
    y = end + 1;
  }

  auto damage = [&](const CellBox& box) {
    int hit = 0;
    for (int y = box.y; y < box.y + box.height; ++y)
      for (int x = box.x; x < box.x + box.width; ++x)
        if (gap.contains(x, y) && gap(x, y)) ++hit;
    return static_cast<double>(hit) / (box.width * box.height);
  };
  auto ink_count = [&](const CellBox& box) {
    int n = 0;
    for (int y = box.y; y < box.y + box.height; ++y)
      for (int x = box.x; x < box.x + box.width; ++x)
        if (image.contains(x, y) && ink(x, y)) ++n;
    return n;
  };

  for (auto [y0, y1] : bands) {
    // Baseline from the most common lowest ink row per component.
    BinaryMask band(w, y1 - y0 + 1);
    for (int y = y0; y <= y1; ++y)
      for (int x = 0; x < w; ++x) band(x, y - y0) = ink(x, y) ? 1 : 0;
    const auto comps = label_components(band);
    std::vector<int> bottom(comps.sizes.size(), -1);
    int lo_x = w, hi_x = -1;
    for (int y = 0; y < band.height(); ++y)
      for (int x = 0; x < w; ++x) {
        const int l = comps.labels(x, y);
        if (!l) continue;
        bottom[l] = std::max(bottom[l], y + y0);
        if (to_gap(x, y + y0) <= reach) {
          lo_x = std::min(lo_x, x);
          hi_x = std::max(hi_x, x);
        }
      }
    std::map<int, int> votes;
    for (std::size_t l = 1; l < bottom.size(); ++l)
      if (comps.sizes[l] >= 4) ++votes[bottom[l]];
    if (votes.empty() || hi_x < 0) continue;
    int mode = votes.begin()->first;
    for (auto [row, n] : votes)
      if (n > votes[mode]) mode = row;
    const int top0 = mode - atlas.baseline() + 1;

    // Skip bands where no cell can be damaged.
    std::vector<int> gap_cols(w + 1, 0);
    for (int x = 0; x < w; ++x) {
      int n = 0;
      for (int y = std::max(0, top0 - 2); y < std::min(h, top0 + ch + 2); ++y) n += gap(x, y);
      gap_cols[x + 1] = gap_cols[x] + n;
    }
    bool possible = false;
    for (int x = 0; x + cw <= w && !possible; ++x)
      possible = gap_cols[x + cw] - gap_cols[x] > params.damage_fraction * cw * ch;
    if (!possible) continue;

    // Cell grid: phase and row offset maximising template agreement.
    LineCells best{0, top0};
    double best_score = -1.0;
    for (int oy = top0 - 2; oy <= top0 + 2; ++oy) {
      for (int ox = 0; ox < adv; ++ox) {
        double score = 0.0;
        const int k0 = static_cast<int>(std::floor(double(lo_x - adv - ox) / adv));
        const int k1 = static_cast<int>(std::floor(double(hi_x + adv - ox) / adv));
        for (int k = k0; k <= k1; ++k) {
          const CellBox box{ox + k * adv, oy, cw, ch};
          if (ink_count(box) < 3 || damage(box) > params.damage_fraction) continue;
          score += recognize_glyph(crop(image, box), atlas, params.min_score).score;
        }
        if (score > best_score || (score == best_score && std::abs(oy - top0) < std::abs(best.top - top0))) {
          best_score = score;
          best = {ox, oy};
        }
      }
    }

    // Words: runs of occupied or damaged cells.
    const int kmin = static_cast<int>(std::floor(double(-best.origin_x) / adv));
    const int kmax = static_cast<int>(std::floor(double(w - 1 - best.origin_x) / adv));
    std::vector<CellBox> run;
    std::vector<char> run_damaged;
    auto flush = [&]() {
      const auto n_damaged = std::count(run_damaged.begin(), run_damaged.end(), 1);
      if (n_damaged > 0 && static_cast<std::size_t>(n_damaged) < run.size()) {
        WordCandidate cand;
        cand.cells = run;
        for (std::size_t i = 0; i < run.size(); ++i) {
          if (run_damaged[i]) {
            cand.text.push_back('?');
            continue;
          }
          const auto r = recognize_glyph(crop(image, run[i]), atlas, params.min_score);
          cand.text.push_back(r.low_confidence ? '?' : r.character);
        }
        cand.damaged_count = static_cast<int>(std::count(cand.text.begin(), cand.text.end(), '?'));
        out.push_back(std::move(cand));
      }
      run.clear();
      run_damaged.clear();
    };
    for (int k = kmin; k <= kmax; ++k) {
      const CellBox box{best.origin_x + k * adv, best.top, cw, ch};
      const bool damaged = damage(box) > params.damage_fraction;
      const bool occupied = ink_count(box) >= 3;
      if (damaged || occupied) {
        run.push_back(box);
        run_damaged.push_back(damaged ? 1 : 0);
      } else {
        flush();
      }
    }
    flush();
  }
  return out;
}

Completion complete_word(const WordCandidate& candidate, const Dictionary& dictionary) {
  Completion out;
  out.text = candidate.text;
  if (candidate.text.find('?') == std::string::npos) return out;
  out.hits = dictionary.matches(candidate.text);
  if (out.hits.empty()) {
    out.status = CompletionStatus::no_completion;
    return out;
  }
  if (out.hits.size() > 1) {
    out.status = CompletionStatus::ambiguous;
    return out;
  }
  bool any_letter = false, all_upper = true;
  for (char c : candidate.text) {
    if (!std::isalpha(static_cast<unsigned char>(c))) continue;
    any_letter = true;
    all_upper = all_upper && std::isupper(static_cast<unsigned char>(c));
  }
  const bool upper = any_letter && all_upper;
  for (std::size_t i = 0; i < out.text.size(); ++i)
    if (out.text[i] == '?') {
      const auto c = static_cast<unsigned char>(out.hits.front()[i]);
      out.text[i] = static_cast<char>(upper ? std::toupper(c) : c);
    }
  out.status = CompletionStatus::completed;
  return out;
}

GrayImage render_repair(const GrayImage& image, const WordCandidate& candidate, const std::string& completed,
                        const GlyphAtlas& atlas) {
  GrayImage out = image;
  const std::size_t n = std::min({candidate.cells.size(), candidate.text.size(), completed.size()});
  for (std::size_t i = 0; i < n; ++i) {
    if (candidate.text[i] != '?' || completed[i] == '?' || !atlas.has(completed[i])) continue;
    const auto& g = atlas.glyph(completed[i]);
    const auto& box = candidate.cells[i];
    for (int y = 0; y < box.height; ++y)
      for (int x = 0; x < box.width; ++x) {
        if (!out.contains(box.x + x, box.y + y)) continue;
        const int gx = std::min(g.width() - 1, x * g.width() / box.width);
        const int gy = std::min(g.height() - 1, y * g.height() / box.height);
        out(box.x + x, box.y + y) = g(gx, gy) ? 0 : 255;
      }
  }
  return out;
}

RepairResult repair(const GrayImage& image, const BinaryMask& gap, const GlyphAtlas& atlas,
                    const Dictionary& dictionary, const RepairParams& params) {
  RepairResult out{image, {}};
  if (!params.enabled) return out;
  for (auto& cand : find_damaged_words(image, gap, atlas, params)) {
    Completion c = complete_word(cand, dictionary);
    if (c.status == CompletionStatus::completed) out.image = render_repair(out.image, cand, c.text, atlas);
    out.words.push_back({std::move(cand), std::move(c)});
  }
  return out;
}

std::string_view to_string(CompletionStatus status) {
  switch (status) {
    case CompletionStatus::unchanged: return "unchanged";
    case CompletionStatus::completed: return "completed";
    case CompletionStatus::no_completion: return "no_completion";
    case CompletionStatus::ambiguous: return "ambiguous";
  }
  return "unknown";
}

}  // namespace tornmend
