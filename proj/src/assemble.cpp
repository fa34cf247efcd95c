#include "tornmend/assemble.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "tornmend/morphology.hpp"
#include "tornmend/orient.hpp"

namespace tornmend {

Rect bounding_box(const BinaryMask& mask) {
  Rect r{-1, -1, -1, -1};
  for (int y = 0; y < mask.height(); ++y) {
    const auto row = mask.row(y);
    if (std::any_of(row.begin(), row.end(), [](std::uint8_t v) { return v != 0; })) {
      if (r.first_row < 0) r.first_row = y;
      r.last_row = y;
    }
  }
  if (r.first_row < 0) throw Error(ErrorCode::EmptyMask, "bounding box of an empty mask");
  for (int x = 0; x < mask.width(); ++x) {
    bool hit = false;
    for (int y = r.first_row; y <= r.last_row && !hit; ++y) hit = mask(x, y) != 0;
    if (hit) {
      if (r.first_col < 0) r.first_col = x;
      r.last_col = x;
    }
  }
  return r;
}

Canvas place(const Fragment& a, const Fragment& b, const Placement& placement, const Polyline& seam, int margin) {
  const double max_x = 4.0 * std::max(a.image.width(), b.image.width());
  const double max_y = 4.0 * std::max(a.image.height(), b.image.height());
  if (std::abs(placement.translation.x) > max_x || std::abs(placement.translation.y) > max_y)
    throw Error(ErrorCode::PlacementOutOfRange, "translation far outside the fragments");

  const Rect ra = bounding_box(a.mask);
  const Rect rb = bounding_box(b.mask);
  double lo_x = ra.first_col, hi_x = ra.last_col, lo_y = ra.first_row, hi_y = ra.last_row;
  for (Point c : {Point{double(rb.first_col), double(rb.first_row)}, Point{double(rb.last_col), double(rb.first_row)},
                  Point{double(rb.first_col), double(rb.last_row)}, Point{double(rb.last_col), double(rb.last_row)}}) {
    const Point p = placement.apply(c);
    lo_x = std::min(lo_x, p.x);
    hi_x = std::max(hi_x, p.x);
    lo_y = std::min(lo_y, p.y);
    hi_y = std::max(hi_y, p.y);
  }
  const int ox = static_cast<int>(std::floor(lo_x)) - margin;
  const int oy = static_cast<int>(std::floor(lo_y)) - margin;
  const int w = static_cast<int>(std::ceil(hi_x)) + margin - ox + 1;
  const int h = static_cast<int>(std::ceil(hi_y)) + margin - oy + 1;

  Canvas c{{double(ox), double(oy)}, GrayImage(w, h, 255), GrayImage(w, h, 255), RealImage(w, h), RealImage(w, h), {}};
  const Affine to_b = placement.affine().inverse();
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int ax = ox + x;
      const int ay = oy + y;
      if (a.mask.contains(ax, ay) && a.mask(ax, ay)) {
        c.layer_a(x, y) = a.image(ax, ay);
        c.alpha_a(x, y) = 1.0;
      }
      const Point q = to_b.apply({double(ax), double(ay)});
      const int bx = static_cast<int>(std::floor(q.x + 0.5));
      const int by = static_cast<int>(std::floor(q.y + 0.5));
      if (b.mask.contains(bx, by) && b.mask(bx, by)) {
        c.layer_b(x, y) = b.image(bx, by);
        c.alpha_b(x, y) = 1.0;
      }
    }
  }
  c.seam.closed = false;
  for (const auto& p : seam.points) c.seam.points.push_back(p - c.origin);
  return c;
}

void BlendParams::validate() const {
  if (feather < 0.0) throw Error(ErrorCode::InvalidConfig, "blend.feather must be >= 0");
  if (max_gap < 0.0) throw Error(ErrorCode::InvalidConfig, "assemble.max_gap must be >= 0");
}

double signed_seam_distance(Point p, const Polyline& seam, Point positive_side) {
  const auto& s = seam.points;
  if (s.size() < 2) return std::numeric_limits<double>::infinity();
  auto nearest = [&](Point q, double& dist) {
    std::size_t best = 0;
    dist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
      const double d = point_segment_distance(q, s[i], s[i + 1]);
      if (d < dist) {
        dist = d;
        best = i;
      }
    }
    return best;
  };
  auto side = [&](Point q, std::size_t seg) { return cross(s[seg + 1] - s[seg], q - s[seg]); };
  double dp = 0.0, dref = 0.0;
  const std::size_t seg = nearest(p, dp);
  const std::size_t ref = nearest(positive_side, dref);
  const bool same = (side(p, seg) >= 0.0) == (side(positive_side, ref) >= 0.0);
  return same ? dp : -dp;
}

BlendResult blend(const Canvas& canvas, const BlendParams& params) {
  params.validate();
  const int w = canvas.width();
  const int h = canvas.height();
  BlendResult out{GrayImage(w, h, 255), BinaryMask(w, h), BinaryMask(w, h)};

  BinaryMask cover_a(w, h), cover_b(w, h);
  Point sum_a{};
  double n_a = 0.0;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      cover_a(x, y) = canvas.alpha_a(x, y) > 0.0;
      cover_b(x, y) = canvas.alpha_b(x, y) > 0.0;
      if (cover_a(x, y)) {
        sum_a = sum_a + Point{double(x), double(y)};
        n_a += 1.0;
      }
    }
  const Point a_side = n_a > 0 ? (1.0 / n_a) * sum_a : Point{};

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const bool in_a = cover_a(x, y);
      const bool in_b = cover_b(x, y);
      if (!in_a && !in_b) {
        out.gap_mask(x, y) = 1;
        continue;
      }
      if (!in_b) {
        out.image(x, y) = canvas.layer_a(x, y);
        continue;
      }
      if (!in_a || params.feather <= 0.0) {
        out.image(x, y) = canvas.layer_b(x, y);
        continue;
      }
      const double s = signed_seam_distance({double(x), double(y)}, canvas.seam, a_side);
      if (std::abs(s) > params.feather) {
        out.image(x, y) = canvas.layer_b(x, y);
        continue;
      }
      const double alpha = std::clamp(0.5 + s / (2.0 * params.feather), 0.0, 1.0);
      const double v = alpha * canvas.layer_a(x, y) + (1.0 - alpha) * canvas.layer_b(x, y);
      out.image(x, y) = static_cast<std::uint8_t>(std::clamp(std::round(v), 0.0, 255.0));
    }
  }

  const auto near_a = distance_to(cover_a);
  const auto near_b = distance_to(cover_b);
  for (std::size_t i = 0; i < out.gap_mask.size(); ++i)
    out.sliver_mask.data()[i] =
        (out.gap_mask.data()[i] && near_a.data()[i] <= params.max_gap && near_b.data()[i] <= params.max_gap) ? 1 : 0;
  return out;
}

Polyline seam_polyline(const SideSegment& side_a, const SideSegment& side_b, const Placement& placement, int n) {
  const auto a = resample(side_a.chain, n);
  const auto b = resample(side_b.chain, n);
  Polyline seam{{}, false};
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Point q = placement.apply(b[b.size() - 1 - i]);
    const Point mid = 0.5 * (a[i] + q);
    if (seam.points.empty() || !(seam.points.back() == mid)) seam.points.push_back(mid);
  }
  return seam;
}

Placement snap_placement(const Placement& placement) {
  Placement out = placement;
  if (placement.rotation == 180) {
    const Point k = 2.0 * placement.pivot + placement.translation;
    out.translation = Point{std::round(k.x), std::round(k.y)} - 2.0 * placement.pivot;
  } else {
    out.translation = {std::round(placement.translation.x), std::round(placement.translation.y)};
  }
  return out;
}

TextRefinement refine_by_text(const Fragment& a, const Fragment& b, const Placement& placement, Point normal,
                              const TextRefineParams& params) {
  TextRefinement out;
  if (!params.enabled) {
    out.reason = "disabled";
    return out;
  }
  if (std::abs(normal.x) < std::abs(normal.y)) {
    out.reason = "seam is not vertical";
    return out;
  }
  const auto ink_a = ink_mask(a.image, a.mask);
  const auto ink_b = ink_mask(b.image, b.mask);
  if (ink_a.count() < params.min_ink || ink_b.count() < params.min_ink) {
    out.reason = "too little ink";
    return out;
  }

  const int pitch = params.advance;
  std::vector<double> hist_a(pitch, 0.0), hist_b(pitch, 0.0);
  std::vector<Point> pts_b;
  int lo_y = std::numeric_limits<int>::max(), hi_y = std::numeric_limits<int>::min();
  for (int y = 0; y < ink_a.height(); ++y)
    for (int x = 0; x < ink_a.width(); ++x)
      if (ink_a(x, y)) {
        hist_a[((x % pitch) + pitch) % pitch] += 1.0;
        lo_y = std::min(lo_y, y);
        hi_y = std::max(hi_y, y);
      }
  for (int y = 0; y < ink_b.height(); ++y)
    for (int x = 0; x < ink_b.width(); ++x)
      if (ink_b(x, y)) {
        const Point p = placement.apply({double(x), double(y)});
        const int px = static_cast<int>(std::floor(p.x + 0.5));
        const int py = static_cast<int>(std::floor(p.y + 0.5));
        pts_b.push_back({double(px), double(py)});
        hist_b[((px % pitch) + pitch) % pitch] += 1.0;
        lo_y = std::min(lo_y, py);
        hi_y = std::max(hi_y, py);
      }

  const int sign = normal.x >= 0.0 ? 1 : -1;
  int best_dx = 0;
  double best_score = -1.0;
  for (int s = params.window_lo; s <= params.window_hi; ++s) {
    const int dx = sign * s;
    double score = 0.0;
    for (int k = 0; k < pitch; ++k) score += hist_a[k] * hist_b[(((k - dx) % pitch) + pitch) % pitch];
    if (score > best_score || (score == best_score && std::abs(dx) < std::abs(best_dx))) {
      best_score = score;
      best_dx = dx;
    }
  }

  const int span = hi_y - lo_y + 1 + 2 * params.max_dy;
  std::vector<double> rows_a(span, 0.0), rows_b(span, 0.0);
  const int base = lo_y - params.max_dy;
  for (int y = 0; y < ink_a.height(); ++y)
    for (int x = 0; x < ink_a.width(); ++x)
      if (ink_a(x, y)) rows_a[y - base] += 1.0;
  for (const auto& p : pts_b) rows_b[static_cast<int>(p.y) - base] += 1.0;
  int best_dy = 0;
  best_score = -1.0;
  for (int dy = -params.max_dy; dy <= params.max_dy; ++dy) {
    double score = 0.0;
    for (int y = 0; y < span; ++y) {
      const int src = y - dy;
      if (src >= 0 && src < span) score += rows_a[y] * rows_b[src];
    }
    if (score > best_score || (score == best_score && std::abs(dy) < std::abs(best_dy))) {
      best_score = score;
      best_dy = dy;
    }
  }
  out.applied = true;
  out.shift = {double(best_dx), double(best_dy)};
  return out;
}

}  // namespace tornmend
