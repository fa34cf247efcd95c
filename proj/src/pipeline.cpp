#include "tornmend/pipeline.hpp"

#include <chrono>
#include <filesystem>

#include "tornmend/morphology.hpp"

namespace tornmend {

namespace {

class Stopwatch {
 public:
  explicit Stopwatch(std::vector<StageTiming>& out) : out_(out), last_(Clock::now()) {}
  void lap(std::string stage) {
    const auto now = Clock::now();
    out_.push_back({std::move(stage), std::chrono::duration<double, std::milli>(now - last_).count()});
    last_ = now;
  }

 private:
  using Clock = std::chrono::steady_clock;
  std::vector<StageTiming>& out_;
  Clock::time_point last_;
};

const SideSegment& side_by_index(const std::vector<SideSegment>& sides, int index) {
  for (const auto& s : sides)
    if (s.side_index == index) return s;
  throw Error(ErrorCode::InvalidArgument, "side index out of range");
}

Point mask_centroid(const BinaryMask& mask) {
  double sx = 0.0, sy = 0.0;
  std::size_t n = 0;
  for (int y = 0; y < mask.height(); ++y)
    for (int x = 0; x < mask.width(); ++x)
      if (mask(x, y)) {
        sx += x;
        sy += y;
        ++n;
      }
  return n ? Point{sx / n, sy / n} : Point{};
}

// Unit normal of the side's chord, pointing away from the fragment body.
Point outward_normal(const SideSegment& side, const BinaryMask& mask) {
  const auto& p = side.chain.points;
  const Point chord = p.back() - p.front();
  const double len = norm(chord);
  if (len == 0.0) return {};
  Point n{-chord.y / len, chord.x / len};
  if (dot(side.chain.centroid() - mask_centroid(mask), n) < 0.0) n = -1.0 * n;
  return n;
}

GlyphAtlas load_atlas(const RepairParams& params) {
  if (params.atlas_path.empty()) return GlyphAtlas::bundled();
  std::filesystem::path manifest(params.atlas_path);
  manifest.replace_extension(".txt");
  return GlyphAtlas::load(params.atlas_path, manifest.string());
}

Dictionary load_dictionary(const RepairParams& params) {
  return params.dictionary_path.empty() ? Dictionary::bundled() : Dictionary::load(params.dictionary_path);
}

}  // namespace

ReconstructionResult stitch(const GrayImage& a, const GrayImage& b, const Config& config) {
  config.validate();
  ReconstructionResult out;
  Stopwatch clock(out.timings);

  // Analysis runs on the filtered scans; the output is composed from the originals.
  const GrayImage filtered_a = anisotropic_diffuse(a, config.diffusion);
  const GrayImage filtered_b = anisotropic_diffuse(b, config.diffusion);
  clock.lap("filter");

  Fragment fa = make_fragment(filtered_a, config.silhouette);
  Fragment fb = make_fragment(filtered_b, config.silhouette);
  Fragment raw_a{a, fa.mask, fa.frame, fa.background};
  Fragment raw_b{b, fb.mask, fb.frame, fb.background};
  clock.lap("silhouette");

  NormalizedPair pair = normalize_pair(std::move(fa), std::move(fb), config.orient);
  auto level = [&](const Fragment& raw, const OrientationEstimate& e) {
    if (e.no_text || std::abs(e.skew_degrees) < config.orient.deadband) return raw;
    return rotate_fragment(raw, -e.skew_degrees);
  };
  raw_a = level(raw_a, pair.estimate_a);
  raw_b = level(raw_b, pair.estimate_b);
  out.orient_a = pair.estimate_a;
  out.orient_b = pair.estimate_b;
  out.frame_a = pair.a.frame;
  out.frame_b = pair.b.frame;
  clock.lap("orient");

  const BoundarySet bounds_a = extract_boundaries(pair.a.image, pair.a.mask, config.contour);
  const BoundarySet bounds_b = extract_boundaries(pair.b.image, pair.b.mask, config.contour);
  out.inner_a = bounds_a.inner.has_value();
  out.inner_b = bounds_b.inner.has_value();
  const auto sides_a = split_sides(bounds_a.matching(), config.simplify, 0);
  const auto sides_b = split_sides(bounds_b.matching(), config.simplify, 1);
  clock.lap("contour");

  const EdgeMap edges_a = canny(pair.a.image, config.canny);
  const EdgeMap edges_b = canny(pair.b.image, config.canny);
  clock.lap("edges");

  const Point extent{double(std::max(pair.a.image.width(), pair.b.image.width())),
                     double(std::max(pair.a.image.height(), pair.b.image.height()))};
  Selection selection;
  try {
    selection = select_pair(sides_a, sides_b, pair.flip_candidates, extent, config.match);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoCandidate) throw;
    out.reason = e.what();
    clock.lap("match");
    return out;
  }
  out.match = selection.best;
  out.candidates = selection.candidates;
  const SideSegment& side_a = side_by_index(sides_a, out.match.side_a);
  const SideSegment& side_b = side_by_index(sides_b, out.match.side_b);
  out.side_a = side_a.chain;
  out.side_b = side_b.chain;
  out.edge_support_a = edge_support(resample(side_a.chain, config.match.samples), edges_a.edges,
                                    config.match.edge_radius);
  out.edge_support_b = edge_support(resample(side_b.chain, config.match.samples), edges_b.edges,
                                    config.match.edge_radius);
  clock.lap("match");

  if (!out.match.accepted) {
    out.reason = "boundary distance variance above tau^2";
    return out;
  }
  if (out.edge_support_a < config.match.edge_support || out.edge_support_b < config.match.edge_support) {
    out.match.accepted = false;
    out.reason = "matched sides not supported by detected edges";
    return out;
  }
  const Placement& best = out.match.placement;
  if (best.rotation == 0 && norm(best.translation) <= 1.0 && pair.a.mask == pair.b.mask) {
    out.match.accepted = false;
    out.reason = "fragment matched against itself";
    return out;
  }

  Placement placement = snap_placement(best);
  out.refinement = refine_by_text(pair.a, pair.b, placement, outward_normal(side_a, pair.a.mask), config.text);
  if (out.refinement.applied) placement.translation = placement.translation + out.refinement.shift;
  out.placement = placement;
  clock.lap("refine");

  const Polyline seam = seam_polyline(side_a, side_b, placement, config.match.samples);
  const Canvas canvas = place(raw_a, raw_b, placement, seam);
  BlendResult blended = blend(canvas, config.blend);
  out.origin = canvas.origin;
  out.gap_mask = std::move(blended.gap_mask);
  out.sliver_mask = std::move(blended.sliver_mask);
  out.gap_pixels = out.sliver_mask.count();
  clock.lap("blend");

  if (config.repair.enabled && out.sliver_mask.any()) {
    const GlyphAtlas atlas = load_atlas(config.repair);
    const Dictionary dictionary = load_dictionary(config.repair);
    RepairResult fixed = repair(blended.image, out.sliver_mask, atlas, dictionary, config.repair);
    blended.image = std::move(fixed.image);
    out.repairs = std::move(fixed.words);
  }
  clock.lap("repair");

  out.image = std::move(blended.image);
  out.accepted = true;
  return out;
}

}  // namespace tornmend
