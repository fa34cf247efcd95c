#include "tornmend/harness.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>

#include "tornmend/contour.hpp"
#include "tornmend/morphology.hpp"
#include "tornmend/orient.hpp"

namespace tornmend {

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // Box-Muller; 1 - u keeps the log argument in (0, 1].
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double phi = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(phi);
  has_spare_ = true;
  return r * std::cos(phi);
}

namespace {

// Left-to-right, top-to-bottom word placement shared by rendering and document synthesis.
class Cursor {
 public:
  Cursor(const GlyphAtlas& atlas, int width, int height, const TextLayout& layout)
      : atlas_(atlas), width_(width), height_(height), layout_(layout), x_(layout.margin_x), y_(layout.margin_top) {}

  /// Where `length` characters would go, or nothing when the page is full.
  std::optional<std::pair<int, int>> slot(std::size_t length) const {
    const int span = static_cast<int>(length) * atlas_.advance();
    const int right = width_ - layout_.margin_x;
    if (layout_.margin_x + span > right) return std::nullopt;
    int x = x_;
    int y = y_;
    if (x != layout_.margin_x) x += atlas_.advance();  // word space
    if (x + span > right) {
      x = layout_.margin_x;
      y += layout_.line_pitch;
    }
    if (y + atlas_.cell_height() > height_ - layout_.margin_bottom) return std::nullopt;
    return std::pair{x, y};
  }

  void advance_to(std::pair<int, int> at, std::size_t length) {
    x_ = at.first + static_cast<int>(length) * atlas_.advance();
    y_ = at.second;
  }

  void newline() {
    x_ = layout_.margin_x;
    y_ += layout_.line_pitch;
  }

 private:
  const GlyphAtlas& atlas_;
  int width_;
  int height_;
  TextLayout layout_;
  int x_;
  int y_;
};

void blit(GrayImage& page, const GlyphAtlas& atlas, const PlacedWord& word) {
  for (std::size_t i = 0; i < word.text.size(); ++i) {
    const BinaryMask& g = atlas.glyph(word.text[i]);
    const int ox = word.x + static_cast<int>(i) * atlas.advance();
    for (int y = 0; y < g.height(); ++y)
      for (int x = 0; x < g.width(); ++x)
        if (g(x, y) && page.contains(ox + x, word.y + y)) page(ox + x, word.y + y) = 0;
  }
}

}  // namespace

GrayImage render_document(const std::string& text, const GlyphAtlas& atlas, int width, int height,
                          std::vector<PlacedWord>* words, const TextLayout& layout) {
  if (width <= 0 || height <= 0) throw Error(ErrorCode::InvalidArgument, "page dimensions must be positive");
  GrayImage page(width, height, 255);
  Cursor cursor(atlas, width, height, layout);
  std::vector<PlacedWord> placed;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == '\n') {
      cursor.newline();
      ++i;
      continue;
    }
    if (c == ' ') {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && text[j] != ' ' && text[j] != '\n') ++j;
    std::string word = text.substr(i, j - i);
    for (char ch : word)
      if (!atlas.has(ch)) throw Error(ErrorCode::InvalidArgument, std::string("character not in atlas: ") + ch);
    const auto at = cursor.slot(word.size());
    if (!at) throw Error(ErrorCode::TextOverflow, "text does not fit on the page at word '" + word + "'");
    cursor.advance_to(*at, word.size());
    placed.push_back({std::move(word), at->first, at->second});
    i = j;
  }
  for (const auto& w : placed) blit(page, atlas, w);
  if (words) *words = std::move(placed);
  return page;
}

Document make_document(std::uint64_t seed, const Dictionary& dictionary, const GlyphAtlas& atlas, int width,
                       int height, const TextLayout& layout) {
  std::vector<const std::string*> pool;
  for (const auto& w : dictionary.words()) {
    if (w.size() < 2 || w.size() > 10) continue;
    if (std::all_of(w.begin(), w.end(), [&](char c) { return atlas.has(c); })) pool.push_back(&w);
  }
  if (pool.empty()) throw Error(ErrorCode::InvalidArgument, "dictionary has no drawable words");

  Rng rng(seed);
  Cursor cursor(atlas, width, height, layout);
  std::string text;
  for (;;) {
    const std::string& w = *pool[rng.index(pool.size())];
    const auto at = cursor.slot(w.size());
    if (!at) break;
    cursor.advance_to(*at, w.size());
    if (!text.empty()) text += ' ';
    text += w;
  }
  Document doc;
  doc.text = text;
  doc.page = render_document(text, atlas, width, height, &doc.words, layout);
  return doc;
}

void TearSpec::validate(int page_width) const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidSpec, what); };
  if (teeth < 1) fail("teeth must be at least 1");
  if (!(amplitude > 0.0)) fail("amplitude must be positive");
  if (!(amplitude < page_width / 8.0)) fail("amplitude must be below a quarter of the fragment width");
  if (!(gap_width >= 0.0)) fail("gap_width must be non-negative");
  if (!(gap_width < amplitude)) fail("gap_width must be below the amplitude");
  if (!(noise_sigma >= 0.0)) fail("noise_sigma must be non-negative");
  if (!(roughness >= 0.0)) fail("roughness must be non-negative");
  if (rim_width < 0) fail("rim_width must be non-negative");
  if (!std::isfinite(displace_b.x) || !std::isfinite(displace_b.y)) fail("displace_b must be finite");
  if (std::floor(displace_b.x) != displace_b.x || std::floor(displace_b.y) != displace_b.y)
    fail("displace_b must be whole pixels");
  if (!(std::abs(skew_degrees) <= 45.0)) fail("skew_degrees must be within 45");
}

double tear_x(const Polyline& tear, double y) {
  const auto& p = tear.points;
  if (p.empty()) throw Error(ErrorCode::InvalidArgument, "empty tear");
  if (y <= p.front().y) return p.front().x;
  if (y >= p.back().y) return p.back().x;
  const auto hi = std::upper_bound(p.begin(), p.end(), y, [](double v, const Point& q) { return v < q.y; });
  const Point b = *hi;
  const Point a = *(hi - 1);
  if (b.y == a.y) return a.x;
  return a.x + (b.x - a.x) * (y - a.y) / (b.y - a.y);
}

double tear_distance(const Polyline& tear, Point p) {
  const auto& q = tear.points;
  if (q.empty()) throw Error(ErrorCode::InvalidArgument, "empty tear");
  if (q.size() == 1) return euclidean_distance(p, q.front());
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < q.size(); ++i) best = std::min(best, point_segment_distance(p, q[i], q[i + 1]));
  return best;
}

namespace {

Polyline make_tear(const TearSpec& spec, int width, int height, Rng& rng) {
  const double center = width / 2.0 + 0.1 * width * rng.uniform(-1.0, 1.0);
  const double slant = 0.06 * rng.uniform(-1.0, 1.0);
  const double mid = (height - 1) / 2.0;
  auto base = [&](double y) { return center + slant * (y - mid); };
  Polyline tear;
  const double bottom = height - 1.0;
  if (spec.kind == TearSpec::Kind::straight) {
    for (double y = 0.0;; y += 10.0) {
      const double yy = std::min(y, bottom);
      tear.points.push_back({base(yy) + rng.uniform(-spec.roughness, spec.roughness), yy});
      if (yy >= bottom) break;
    }
  } else {
    const int n = 2 * spec.teeth;
    double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
    for (int i = 0; i <= n; ++i) {
      const double y = bottom * i / n;
      double x = base(y);
      if (i % 2 == 1) {
        x += sign * spec.amplitude * rng.uniform(0.6, 1.0);
        sign = -sign;
      }
      tear.points.push_back({x, y});
    }
  }
  return tear;
}

void add_noise(GrayImage& img, double sigma, Rng& rng) {
  if (sigma <= 0.0) return;
  for (auto& v : img.data()) {
    const double n = v + sigma * rng.normal();
    v = static_cast<std::uint8_t>(std::clamp(std::floor(n + 0.5), 0.0, 255.0));
  }
}

void add_rim(GrayImage& canvas, const BinaryMask& paper, int width, std::uint8_t intensity) {
  if (width <= 0) return;
  const RealImage d = distance_to(invert(paper));
  for (int y = 0; y < canvas.height(); ++y)
    for (int x = 0; x < canvas.width(); ++x)
      if (paper(x, y) && d(x, y) <= width) canvas(x, y) = std::min(canvas(x, y), intensity);
}

}  // namespace

TornPair generate_pair(const GrayImage& page, const TearSpec& spec, const HarnessGeometry& geometry) {
  spec.validate(page.width());
  const int w = page.width();
  const int h = page.height();
  const int cw = geometry.canvas_width;
  const int ch = geometry.canvas_height;
  const Point margin{static_cast<double>(geometry.margin_x), static_cast<double>(geometry.margin_y)};
  const Point shift_b = margin + spec.displace_b;
  if (std::floor(shift_b.x) != shift_b.x || std::floor(shift_b.y) != shift_b.y)
    throw Error(ErrorCode::InvalidSpec, "displace_b must be whole pixels");
  if (margin.x < 0 || margin.y < 0 || margin.x + w > cw || margin.y + h > ch)
    throw Error(ErrorCode::InvalidSpec, "page does not fit on the scan canvas");

  Rng rng(spec.seed);
  TornPair out;
  out.truth.tear = make_tear(spec, w, h, rng);
  out.truth.gap_width = spec.gap_width;
  out.truth.flip_b = spec.flip_b;
  out.truth.page_width = w;
  out.truth.page_height = h;

  out.owner = Grid<std::uint8_t>(w, h, 0);
  const double half_gap = spec.gap_width / 2.0;
  for (int y = 0; y < h; ++y) {
    const double split = tear_x(out.truth.tear, y);
    for (int x = 0; x < w; ++x) {
      if (spec.gap_width > 0.0 && tear_distance(out.truth.tear, {double(x), double(y)}) <= half_gap) continue;
      out.owner(x, y) = x < split ? 1 : 2;
    }
  }

  const Affine flip{-1.0, 0.0, 0.0, -1.0, cw - 1.0, ch - 1.0};
  const Affine page_to_a = Affine::translation(margin);
  const Affine page_to_b = spec.flip_b ? flip * Affine::translation(shift_b) : Affine::translation(shift_b);

  GrayImage a(cw, ch, geometry.background);
  GrayImage b(cw, ch, geometry.background);
  BinaryMask paper_a(cw, ch);
  BinaryMask paper_b(cw, ch);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::uint8_t o = out.owner(x, y);
      if (o == 0) continue;
      const Affine& m = o == 1 ? page_to_a : page_to_b;
      const Point q = m.apply({double(x), double(y)});
      const int qx = static_cast<int>(q.x);
      const int qy = static_cast<int>(q.y);
      if (!a.contains(qx, qy)) throw Error(ErrorCode::InvalidSpec, "displaced fragment leaves the scan canvas");
      (o == 1 ? a : b)(qx, qy) = page(x, y);
      (o == 1 ? paper_a : paper_b)(qx, qy) = 1;
    }
  }
  add_rim(a, paper_a, spec.rim_width, geometry.rim_intensity);
  add_rim(b, paper_b, spec.rim_width, geometry.rim_intensity);

  Affine skew;
  if (spec.skew_degrees != 0.0) {
    const RotationFrame frame = rotation_frame(cw, ch, spec.skew_degrees);
    a = rotate_image(a, frame, geometry.background);
    b = rotate_image(b, frame, geometry.background);
    skew = frame.map;
  }
  add_noise(a, spec.noise_sigma, rng);
  add_noise(b, spec.noise_sigma, rng);

  out.a = std::move(a);
  out.b = std::move(b);
  out.truth.page_to_a = skew * page_to_a;
  out.truth.page_to_b = skew * page_to_b;
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

BinaryMask ink_of(const GrayImage& img) {
  const Binarization bin = binarize(img, Threshold::otsu());
  BinaryMask ink(img.width(), img.height());
  for (std::size_t i = 0; i < img.size(); ++i)
    ink.data()[i] = bin.degenerate ? img.data()[i] < 128 : !bin.mask.data()[i];
  return ink;
}

struct Scored {
  double pixel = 0.0;
  double iou = 0.0;
  double recall = 0.0;
  double precision = 0.0;
  Point shift;
};

// `page_to_image` takes page pixels to pixels of `image`; the best integer
// offset within +-search is added on top.
Scored score_image(const GrayImage& image, const Affine& page_to_image, const GroundTruth& truth,
                   const GrayImage& original, const EvalParams& params) {
  const BinaryMask truth_ink = ink_of(original);
  const BinaryMask image_ink = ink_of(image);
  const double band = params.seam_band + truth.gap_width / 2.0;

  struct Sample {
    int x, y;  // rounded position in image
    bool ink;  // original
  };
  std::vector<Sample> samples;
  samples.reserve(original.size());
  for (int y = 0; y < original.height(); ++y) {
    for (int x = 0; x < original.width(); ++x) {
      if (!truth.tear.points.empty() && tear_distance(truth.tear, {double(x), double(y)}) <= band) continue;
      const Point q = page_to_image.apply({double(x), double(y)});
      samples.push_back({static_cast<int>(std::floor(q.x + 0.5)), static_cast<int>(std::floor(q.y + 0.5)),
                         truth_ink(x, y) != 0});
    }
  }
  if (samples.empty()) return {};

  auto ink_at = [&](int x, int y) { return image_ink.contains(x, y) && image_ink(x, y); };
  long best_agree = -1;
  int best_r2 = 0;
  Point best_shift;
  for (int dy = -params.search; dy <= params.search; ++dy) {
    for (int dx = -params.search; dx <= params.search; ++dx) {
      long agree = 0;
      for (const Sample& s : samples) agree += ink_at(s.x + dx, s.y + dy) == s.ink;
      const int r2 = dx * dx + dy * dy;
      if (agree > best_agree || (agree == best_agree && r2 < best_r2)) {
        best_agree = agree;
        best_r2 = r2;
        best_shift = {double(dx), double(dy)};
      }
    }
  }

  long both = 0, only_truth = 0, only_image = 0;
  const int dx = static_cast<int>(best_shift.x);
  const int dy = static_cast<int>(best_shift.y);
  for (const Sample& s : samples) {
    const bool r = ink_at(s.x + dx, s.y + dy);
    both += r && s.ink;
    only_truth += s.ink && !r;
    only_image += r && !s.ink;
  }
  Scored out;
  out.shift = best_shift;
  out.pixel = static_cast<double>(best_agree) / static_cast<double>(samples.size());
  const long uni = both + only_truth + only_image;
  out.iou = uni == 0 ? 1.0 : static_cast<double>(both) / static_cast<double>(uni);
  out.recall = both + only_truth == 0 ? 1.0 : static_cast<double>(both) / static_cast<double>(both + only_truth);
  out.precision = both + only_image == 0 ? 1.0 : static_cast<double>(both) / static_cast<double>(both + only_image);
  return out;
}

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::infinity();
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  return *mid;
}

double median_tear_distance(const Polyline& side, const Affine& to_page, const Polyline& tear) {
  std::vector<double> d;
  d.reserve(side.size());
  for (Point p : side.points) d.push_back(tear_distance(tear, to_page.apply(p)));
  return median(std::move(d));
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

EvalReport evaluate_image(const GrayImage& aligned, const GroundTruth& truth, const GrayImage& original,
                          const EvalParams& params) {
  EvalReport report;
  report.reconstructed = true;
  report.accepted = true;
  report.match_correct = true;
  report.placement_error = 0.0;
  const Scored s = score_image(aligned, Affine{}, truth, original, params);
  report.pixel_agreement = s.pixel;
  report.ink_agreement = s.iou;
  report.ink_recall = s.recall;
  report.ink_precision = s.precision;
  report.alignment = s.shift;
  return report;
}

EvalReport evaluate(const ReconstructionResult& result, const GroundTruth& truth, const GrayImage& original,
                    const EvalParams& params) {
  EvalReport report;
  report.accepted = result.accepted;
  report.timings = result.timings;
  if (!result.image) return report;
  report.reconstructed = true;

  // Scan coordinates of each side, then page coordinates.
  const Affine a_to_page = truth.page_to_a.inverse() * result.frame_a.inverse();
  const Affine b_to_page = truth.page_to_b.inverse() * result.frame_b.inverse();
  const double limit = truth.gap_width / 2.0 + params.side_tolerance;
  const bool sides_on_tear = median_tear_distance(result.side_a, a_to_page, truth.tear) <= limit &&
                             median_tear_distance(result.side_b, b_to_page, truth.tear) <= limit;

  // Recovered and true scan B -> scan A maps.
  const Affine recovered = result.frame_a.inverse() * result.placement.affine() * result.frame_b;
  const Affine expected = truth.b_to_a();
  const Point ux = recovered.apply_linear({1.0, 0.0});
  const Point tx = expected.apply_linear({1.0, 0.0});
  const bool same_turn = dot(ux, tx) > std::cos(std::numbers::pi / 4.0) * norm(ux) * norm(tx);
  report.match_correct = sides_on_tear && same_turn;

  Point probe;
  if (!result.side_b.points.empty()) probe = result.frame_b.inverse().apply(result.side_b.centroid());
  report.placement_error = norm(recovered.apply(probe) - expected.apply(probe));

  const Affine page_to_canvas = Affine::translation(Point{} - result.origin) * result.frame_a * truth.page_to_a;
  const Scored s = score_image(*result.image, page_to_canvas, truth, original, params);
  report.pixel_agreement = s.pixel;
  report.ink_agreement = s.iou;
  report.ink_recall = s.recall;
  report.ink_precision = s.precision;
  report.alignment = s.shift;

  const Affine canvas_to_page = page_to_canvas.inverse();
  for (const RepairOutcome& r : result.repairs) {
    switch (r.completion.status) {
      case CompletionStatus::unchanged:
        continue;
      case CompletionStatus::ambiguous:
        ++report.repaired.ambiguous;
        continue;
      case CompletionStatus::no_completion:
        ++report.repaired.failed;
        continue;
      case CompletionStatus::completed:
        break;
    }
    const CellBox& first = r.candidate.cells.front();
    const Point at = canvas_to_page.apply({first.x + first.width / 2.0 - s.shift.x, first.y + first.height / 2.0 - s.shift.y});
    bool ok = false;
    for (const PlacedWord& w : truth.words) {
      const bool inside = at.x >= w.x && at.x < w.x + first.width && at.y >= w.y && at.y < w.y + first.height;
      if (inside) {
        ok = lower(w.text) == lower(r.completion.text);
        break;
      }
    }
    ++(ok ? report.repaired.correct : report.repaired.failed);
  }
  return report;
}

}  // namespace tornmend
