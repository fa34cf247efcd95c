#include "tornmend/contour.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "tornmend/morphology.hpp"

namespace tornmend {
namespace {

// Counter-clockwise as displayed, starting west.
constexpr int kDx[8] = {-1, -1, 0, 1, 1, 1, 0, -1};
constexpr int kDy[8] = {0, 1, 1, 1, 0, -1, -1, -1};

int direction_of(int dx, int dy) {
  for (int d = 0; d < 8; ++d)
    if (kDx[d] == dx && kDy[d] == dy) return d;
  return -1;
}

void dp_recurse(const std::vector<Point>& pts, std::size_t first, std::size_t last, double tolerance,
                std::vector<std::size_t>& keep) {
  if (last <= first + 1) return;
  double dmax = -1.0;
  std::size_t index = first;
  for (std::size_t i = first + 1; i < last; ++i) {
    const double d = point_segment_distance(pts[i], pts[first], pts[last]);
    if (d > dmax) {
      dmax = d;
      index = i;
    }
  }
  if (dmax > tolerance) {
    dp_recurse(pts, first, index, tolerance, keep);
    keep.push_back(index);
    dp_recurse(pts, index, last, tolerance, keep);
  }
}

std::vector<std::size_t> dp_open(const std::vector<Point>& pts, double tolerance) {
  std::vector<std::size_t> keep{0};
  if (pts.size() < 2) return keep;
  dp_recurse(pts, 0, pts.size() - 1, tolerance, keep);
  keep.push_back(pts.size() - 1);
  return keep;
}

double shoelace(const std::vector<Point>& pts) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Point& p = pts[i];
    const Point& q = pts[(i + 1) % pts.size()];
    s += p.x * q.y - q.x * p.y;
  }
  return s;
}

}  // namespace

void SimplifyParams::validate() const {
  if (!(tolerance > 0.0)) throw Error(ErrorCode::InvalidConfig, "contour.tolerance must be > 0");
  if (!(corner_factor >= 1.0)) throw Error(ErrorCode::InvalidConfig, "contour.corner_factor must be >= 1");
  if (!(corner_angle > 0.0 && corner_angle < 180.0))
    throw Error(ErrorCode::InvalidConfig, "contour.corner_angle must be in (0, 180)");
}

Polyline trace_boundary(const BinaryMask& mask) {
  if (!mask.any()) throw Error(ErrorCode::EmptyMask, "nothing to trace");
  const BinaryMask comp = largest_component(mask);
  const std::size_t area = comp.count();
  if (area < 4) throw Error(ErrorCode::EmptyBoundary, "component of " + std::to_string(area) + " pixels");

  int sx = -1, sy = -1;
  for (int y = 0; y < comp.height() && sy < 0; ++y)
    for (int x = 0; x < comp.width(); ++x)
      if (comp(x, y)) {
        sx = x;
        sy = y;
        break;
      }
  auto fg = [&](int x, int y) { return comp.contains(x, y) && comp(x, y) != 0; };

  Polyline out{{{static_cast<double>(sx), static_cast<double>(sy)}}, true};
  int cx = sx, cy = sy;
  int back = 0;  // west of the start pixel is background
  int first_x = -1, first_y = -1;
  const std::size_t limit = 8 * area + 16;
  for (std::size_t step = 0; step < limit; ++step) {
    int d = -1;
    for (int i = 1; i <= 8; ++i) {
      const int k = (back + i) % 8;
      if (fg(cx + kDx[k], cy + kDy[k])) {
        d = k;
        break;
      }
    }
    if (d < 0) break;
    const int nx = cx + kDx[d];
    const int ny = cy + kDy[d];
    if (step == 0) {
      first_x = nx;
      first_y = ny;
    } else if (cx == sx && cy == sy && nx == first_x && ny == first_y) {
      break;
    }
    const int bx = cx + kDx[(d + 7) % 8];
    const int by = cy + kDy[(d + 7) % 8];
    back = direction_of(bx - nx, by - ny);
    cx = nx;
    cy = ny;
    out.points.push_back({static_cast<double>(cx), static_cast<double>(cy)});
  }
  // The walk re-enters the start pixel before the stop test fires.
  if (out.points.size() > 1 && out.points.back() == out.points.front()) out.points.pop_back();
  return out;
}

double signed_area(const Polyline& ring) noexcept { return -0.5 * shoelace(ring.points); }

bool point_in_polygon(Point p, const Polyline& ring) noexcept {
  bool inside = false;
  const auto& v = ring.points;
  for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
    if ((v[i].y > p.y) != (v[j].y > p.y)) {
      const double x = v[j].x + (p.y - v[j].y) * (v[i].x - v[j].x) / (v[i].y - v[j].y);
      if (p.x < x) inside = !inside;
    }
  }
  return inside;
}

BoundarySet extract_boundaries(const GrayImage& img, const BinaryMask& mask, const ContourParams& params) {
  if (!img.same_shape(mask)) throw Error(ErrorCode::InvalidArgument, "image and mask shapes differ");
  BoundarySet out;
  const BinaryMask silhouette = largest_component(mask);
  out.outer = trace_boundary(silhouette);

  const auto to_edge = distance_to(invert(silhouette));
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < img.size(); ++i) {
    if (silhouette.data()[i] && to_edge.data()[i] <= params.rim_band) {
      sum += img.data()[i];
      ++n;
    }
  }
  if (n == 0 || sum / static_cast<double>(n) >= params.rim_threshold) return out;

  BinaryMask paper(img.width(), img.height());
  for (std::size_t i = 0; i < img.size(); ++i)
    paper.data()[i] = (silhouette.data()[i] && img.data()[i] >= params.rim_threshold) ? 1 : 0;
  // Opening drops one- and two-pixel spurs that would make the trace double back.
  paper = dilate(erode(paper, 1.5), 1.5);
  if (!paper.any()) return out;
  paper = fill_holes(largest_component(paper));
  if (paper.count() >= 4) out.inner = trace_boundary(paper);
  return out;
}

double point_segment_distance(Point p, Point a, Point b) noexcept {
  const Point ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return norm(p - a);
  const double t = dot(p - a, ab) / len2;
  if (t <= 0.0) return norm(p - a);
  if (t >= 1.0) return norm(p - b);
  return std::abs(cross(ab, p - a)) / std::sqrt(len2);
}

std::vector<std::size_t> simplify_dp_indices(const Polyline& line, double tolerance) {
  const auto& pts = line.points;
  if (pts.size() < 2) throw Error(ErrorCode::InvalidArgument, "simplification needs at least 2 points");
  if (!line.closed || pts.size() < 3) return dp_open(pts, tolerance);

  std::size_t fi = 0, fj = 1;
  double best = -1.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const Point d = pts[j] - pts[i];
      const double d2 = dot(d, d);
      if (d2 > best) {
        best = d2;
        fi = i;
        fj = j;
      }
    }
  }
  std::vector<Point> first(pts.begin() + static_cast<std::ptrdiff_t>(fi), pts.begin() + static_cast<std::ptrdiff_t>(fj) + 1);
  std::vector<Point> second(pts.begin() + static_cast<std::ptrdiff_t>(fj), pts.end());
  second.insert(second.end(), pts.begin(), pts.begin() + static_cast<std::ptrdiff_t>(fi) + 1);

  std::vector<std::size_t> keep;
  for (auto k : dp_open(first, tolerance)) keep.push_back(fi + k);
  for (auto k : dp_open(second, tolerance)) keep.push_back((fj + k) % pts.size());
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  return keep;
}

Polyline simplify_dp(const Polyline& line, double tolerance) {
  Polyline out{{}, line.closed};
  for (auto i : simplify_dp_indices(line, tolerance)) out.points.push_back(line.points[i]);
  return out;
}

double chord_deviation(const Polyline& chain) noexcept {
  if (chain.points.size() < 3) return 0.0;
  double dmax = 0.0;
  for (const auto& p : chain.points)
    dmax = std::max(dmax, point_segment_distance(p, chain.points.front(), chain.points.back()));
  return dmax;
}

std::vector<SideSegment> split_sides(const Polyline& boundary, const SimplifyParams& params, int fragment_id) {
  params.validate();
  const auto& pts = boundary.points;
  const std::size_t n = pts.size();
  if (n < 4) throw Error(ErrorCode::DegenerateBoundary, "boundary has " + std::to_string(n) + " points");

  const auto kept = simplify_dp_indices(Polyline{pts, true}, params.corner_factor * params.tolerance);
  const double orientation = shoelace(pts);
  std::vector<std::size_t> cuts;
  if (kept.size() >= 3) {
    for (std::size_t j = 0; j < kept.size(); ++j) {
      const Point u = pts[kept[(j + kept.size() - 1) % kept.size()]];
      const Point v = pts[kept[j]];
      const Point w = pts[kept[(j + 1) % kept.size()]];
      const Point e1 = u - v;
      const Point e2 = w - v;
      const double turn = cross(v - u, w - v);
      const bool convex = turn != 0.0 && (turn > 0.0) == (orientation > 0.0);
      if (!convex) continue;
      const double c = std::clamp(dot(e1, e2) / (norm(e1) * norm(e2)), -1.0, 1.0);
      const double angle = std::acos(c) * 180.0 / std::numbers::pi;
      if (angle <= params.corner_angle) cuts.push_back(kept[j]);
    }
  }
  if (cuts.empty()) cuts.push_back(0);

  std::vector<SideSegment> sides;
  for (std::size_t k = 0; k < cuts.size(); ++k) {
    const std::size_t from = cuts[k];
    const std::size_t to = cuts[(k + 1) % cuts.size()];
    SideSegment side;
    side.fragment_id = fragment_id;
    side.side_index = static_cast<int>(k);
    side.first = from;
    side.last = to;
    const std::size_t span = to > from ? to - from : to + n - from;
    for (std::size_t i = 0; i <= span; ++i) side.chain.points.push_back(pts[(from + i) % n]);
    const bool jagged = dp_open(side.chain.points, params.tolerance).size() > 2 ||
                        chord_deviation(side.chain) > 2.0 * params.tolerance;
    side.classification = jagged ? SideClass::non_uniform : SideClass::uniform;
    sides.push_back(std::move(side));
  }
  return sides;
}

std::string sides_to_svg(const std::vector<SideSegment>& sides, int width, int height) {
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
  for (const auto& side : sides) {
    os << "  <path data-side=\"" << side.side_index << "\" data-class=\""
       << (side.classification == SideClass::uniform ? "uniform" : "non-uniform") << "\" fill=\"none\" stroke=\""
       << (side.classification == SideClass::uniform ? "#1f77b4" : "#d62728") << "\" d=\"";
    for (std::size_t i = 0; i < side.chain.points.size(); ++i)
      os << (i == 0 ? "M" : " L") << side.chain.points[i].x << ' ' << side.chain.points[i].y;
    os << "\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace tornmend
