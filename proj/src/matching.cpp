#include "tornmend/matching.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace tornmend {
namespace {

// Chord directions along a, used to tell the outward side of each sample.
std::vector<Point> tangents(const std::vector<Point>& a) {
  std::vector<Point> t(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = i + 1 == a.size() ? i : i + 1;
    t[i] = a[hi] - a[lo];
  }
  return t;
}

// Euclidean length of v, negative when v points into the fragment. Boundaries
// run counter-clockwise as displayed, so outward is where cross(tangent, v) > 0.
double signed_length(Point tangent, Point v) noexcept {
  const double d = norm(v);
  return cross(tangent, v) < 0.0 ? -d : d;
}

struct Objective {
  std::vector<Point> residual;  // a_i - placed b'_i with zero translation
  std::vector<Point> tangent;
  double standoff = 0.0;

  double operator()(Point t) const noexcept {
    double acc = 0.0;
    for (std::size_t i = 0; i < residual.size(); ++i) {
      const double d = signed_length(tangent[i], t - residual[i]) - standoff;
      acc += d * d;
    }
    return acc / static_cast<double>(residual.size());
  }
};

struct Probe {
  Point t;
  double j = 0.0;
};

// Tie-aware ordering: objective (to a relative 1e-12), then |t|, then (dx, dy).
bool precedes(const Probe& p, const Probe& q) {
  const double scale = std::max({1.0, std::abs(p.j), std::abs(q.j)});
  if (std::abs(p.j - q.j) > 1e-12 * scale) return p.j < q.j;
  const double np = norm(p.t);
  const double nq = norm(q.t);
  if (np != nq) return np < nq;
  if (p.t.x != q.t.x) return p.t.x < q.t.x;
  return p.t.y < q.t.y;
}

std::vector<Point> placed_reversed(const std::vector<Point>& b, const Placement& zero) {
  std::vector<Point> out(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) out[i] = zero.apply(b[b.size() - 1 - i]);
  return out;
}

}  // namespace

Point Placement::apply(Point p) const noexcept {
  if (rotation == 180) return Point{2.0 * pivot.x - p.x + translation.x, 2.0 * pivot.y - p.y + translation.y};
  return p + translation;
}

Affine Placement::affine() const noexcept {
  if (rotation == 180)
    return {-1.0, 0.0, 0.0, -1.0, 2.0 * pivot.x + translation.x, 2.0 * pivot.y + translation.y};
  return Affine::translation(translation);
}

Placement Placement::inverse(Point new_pivot) const noexcept {
  if (rotation == 180) {
    const Point t = 2.0 * pivot + translation - 2.0 * new_pivot;
    return {180, t, new_pivot};
  }
  return {0, Point{-translation.x, -translation.y}, new_pivot};
}

DistanceProfile DistanceProfile::from_samples(std::vector<double> samples) {
  DistanceProfile p;
  p.samples = std::move(samples);
  if (p.samples.empty()) return p;
  double sum = 0.0;
  for (double s : p.samples) sum += s;
  p.mean = sum / static_cast<double>(p.samples.size());
  double ss = 0.0;
  for (double s : p.samples) ss += (s - p.mean) * (s - p.mean);
  p.variance = ss / static_cast<double>(p.samples.size());
  return p;
}

void MatchParams::validate() const {
  if (!(tau > 0.0)) throw Error(ErrorCode::InvalidConfig, "match.tau must be > 0");
  if (samples < 2) throw Error(ErrorCode::InvalidConfig, "match.samples must be >= 2");
  if (standoff < 0.0) throw Error(ErrorCode::InvalidConfig, "match.standoff must be >= 0");
  if (!(coarse_step >= 1.0)) throw Error(ErrorCode::InvalidConfig, "match.coarse_step must be >= 1");
  if (!(edge_support >= 0.0 && edge_support <= 1.0)) throw Error(ErrorCode::InvalidConfig, "match.edge_support out of range");
  if (edge_radius < 0.0) throw Error(ErrorCode::InvalidConfig, "match.edge_radius must be >= 0");
}

double euclidean_distance(Point p, Point q) noexcept { return std::sqrt((q.x - p.x) * (q.x - p.x) + (q.y - p.y) * (q.y - p.y)); }

std::vector<Point> resample(const Polyline& chain, int n) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "resample needs n >= 2");
  const auto& pts = chain.points;
  if (pts.size() < 2) throw Error(ErrorCode::ZeroLengthChain, "chain has fewer than 2 points");
  std::vector<double> cum(pts.size(), 0.0);
  for (std::size_t i = 1; i < pts.size(); ++i) cum[i] = cum[i - 1] + euclidean_distance(pts[i - 1], pts[i]);
  const double total = cum.back();
  if (!(total > 0.0)) throw Error(ErrorCode::ZeroLengthChain, "chain has zero length");

  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(n));
  out.push_back(pts.front());
  std::size_t seg = 1;
  for (int k = 1; k < n - 1; ++k) {
    const double s = total * k / (n - 1);
    while (seg + 1 < pts.size() && cum[seg] < s) ++seg;
    const double len = cum[seg] - cum[seg - 1];
    const double u = len > 0.0 ? (s - cum[seg - 1]) / len : 0.0;
    out.push_back(pts[seg - 1] + u * (pts[seg] - pts[seg - 1]));
  }
  out.push_back(pts.back());
  return out;
}

DistanceProfile distance_profile(const std::vector<Point>& a, const std::vector<Point>& b, const Placement& placement) {
  if (a.size() != b.size() || a.empty()) throw Error(ErrorCode::InvalidArgument, "sample counts differ");
  const auto tan = tangents(a);
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = signed_length(tan[i], placement.apply(b[b.size() - 1 - i]) - a[i]);
  return DistanceProfile::from_samples(std::move(d));
}

DistanceProfile distance_profile(const SideSegment& side_a, const SideSegment& side_b, const Placement& placement,
                                 int n) {
  return distance_profile(resample(side_a.chain, n), resample(side_b.chain, n), placement);
}

Alignment align_sides(const SideSegment& side_a, const SideSegment& side_b, int rotation, Point extent,
                      const MatchParams& params) {
  params.validate();
  if (rotation != 0 && rotation != 180) throw Error(ErrorCode::InvalidArgument, "rotation must be 0 or 180");
  const auto a = resample(side_a.chain, params.samples);
  const auto b = resample(side_b.chain, params.samples);
  const Placement zero{rotation, {}, side_b.chain.centroid()};
  const auto bp = placed_reversed(b, zero);

  Objective f;
  f.standoff = params.standoff;
  f.tangent = tangents(a);
  f.residual.resize(a.size());
  Point mean{};
  for (std::size_t i = 0; i < a.size(); ++i) {
    f.residual[i] = a[i] - bp[i];
    mean = mean + f.residual[i];
  }
  mean = (1.0 / static_cast<double>(a.size())) * mean;
  const Point center{std::round(mean.x), std::round(mean.y)};

  const double step = params.coarse_step;
  const int nx = static_cast<int>(std::floor(extent.x / 2.0 / step));
  const int ny = static_cast<int>(std::floor(extent.y / 2.0 / step));
  Probe best{center, f(center)};
  for (int j = -ny; j <= ny; ++j)
    for (int i = -nx; i <= nx; ++i) {
      const Point t{center.x + i * step, center.y + j * step};
      const Probe p{t, f(t)};
      if (precedes(p, best)) best = p;
    }

  for (double s : {1.0, 0.25}) {
    for (bool moved = true; moved;) {
      moved = false;
      Probe next = best;
      for (int j = -1; j <= 1; ++j)
        for (int i = -1; i <= 1; ++i) {
          if (i == 0 && j == 0) continue;
          const Point t{best.t.x + i * s, best.t.y + j * s};
          const Probe p{t, f(t)};
          if (precedes(p, next)) next = p;
        }
      if (precedes(next, best)) {
        best = next;
        moved = true;
      }
    }
  }

  Placement placement = zero;
  placement.translation = best.t;
  const auto profile = distance_profile(a, b, placement);
  return {best.t, profile.variance, best.j};
}

Selection select_pair(const std::vector<SideSegment>& sides_a, const std::vector<SideSegment>& sides_b,
                      const std::vector<int>& rotations, Point extent, const MatchParams& params) {
  auto jagged = [](const SideSegment& s) { return s.classification == SideClass::non_uniform; };
  if (std::none_of(sides_a.begin(), sides_a.end(), jagged))
    throw Error(ErrorCode::NoCandidate, "fragment A has no non-uniform side");
  if (std::none_of(sides_b.begin(), sides_b.end(), jagged))
    throw Error(ErrorCode::NoCandidate, "fragment B has no non-uniform side");
  if (rotations.empty()) throw Error(ErrorCode::InvalidArgument, "no rotations to try");

  Selection out;
  for (const auto& sa : sides_a) {
    if (!jagged(sa)) continue;
    for (const auto& sb : sides_b) {
      if (!jagged(sb)) continue;
      for (int rot : rotations) {
        const auto al = align_sides(sa, sb, rot, extent, params);
        MatchScore score;
        score.side_a = sa.side_index;
        score.side_b = sb.side_index;
        score.placement = Placement{rot, al.translation, sb.chain.centroid()};
        score.variance = al.variance;
        score.objective = al.objective;
        score.accepted = al.variance <= params.tau * params.tau;
        out.candidates.push_back(score);
      }
    }
  }
  auto key = [](const MatchScore& s) { return std::make_tuple(s.variance, s.side_a, s.side_b, s.placement.rotation); };
  out.best = *std::min_element(out.candidates.begin(), out.candidates.end(),
                               [&](const MatchScore& x, const MatchScore& y) { return key(x) < key(y); });
  return out;
}

double edge_support(const std::vector<Point>& points, const BinaryMask& edges, double radius) {
  if (points.empty()) return 0.0;
  const int r = static_cast<int>(std::ceil(radius));
  std::size_t near = 0;
  for (const auto& p : points) {
    const int px = static_cast<int>(std::lround(p.x));
    const int py = static_cast<int>(std::lround(p.y));
    bool hit = false;
    for (int j = -r; j <= r && !hit; ++j)
      for (int i = -r; i <= r && !hit; ++i) {
        const int x = px + i;
        const int y = py + j;
        if (edges.contains(x, y) && edges(x, y) && std::hypot(x - p.x, y - p.y) <= radius) hit = true;
      }
    if (hit) ++near;
  }
  return static_cast<double>(near) / static_cast<double>(points.size());
}

}  // namespace tornmend
