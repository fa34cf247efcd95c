#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tornmend/error.hpp"

namespace tornmend {

/// Row-major 2D grid; the storage behind every raster type.
template <class T>
class Grid {
 public:
  using value_type = T;

  Grid() = default;
  Grid(int width, int height, T fill = T{}) : width_(width), height_(height) {
    if (width < 0 || height < 0) throw Error(ErrorCode::InvalidArgument, "negative grid dimensions");
    data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
  }
  Grid(int width, int height, std::vector<T> data) : width_(width), height_(height), data_(std::move(data)) {
    if (width < 0 || height < 0 || data_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
      throw Error(ErrorCode::InvalidArgument, "grid data does not match dimensions");
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  bool contains(int x, int y) const noexcept { return x >= 0 && y >= 0 && x < width_ && y < height_; }

  T& operator()(int x, int y) noexcept { return data_[index(x, y)]; }
  const T& operator()(int x, int y) const noexcept { return data_[index(x, y)]; }

  /// Replicated-edge lookup.
  const T& clamped(int x, int y) const noexcept {
    x = x < 0 ? 0 : (x >= width_ ? width_ - 1 : x);
    y = y < 0 ? 0 : (y >= height_ ? height_ - 1 : y);
    return data_[index(x, y)];
  }

  std::span<T> row(int y) noexcept { return {data_.data() + index(0, y), static_cast<std::size_t>(width_)}; }
  std::span<const T> row(int y) const noexcept {
    return {data_.data() + index(0, y), static_cast<std::size_t>(width_)};
  }

  std::vector<T>& data() noexcept { return data_; }
  const std::vector<T>& data() const noexcept { return data_; }

  bool same_shape(const Grid& other) const noexcept { return width_ == other.width_ && height_ == other.height_; }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

/// 8-bit intensities, 0 = black, 255 = white.
class GrayImage : public Grid<std::uint8_t> {
 public:
  using Grid::Grid;
};

/// Foreground = 1, background = 0.
class BinaryMask : public Grid<std::uint8_t> {
 public:
  using Grid::Grid;

  std::size_t count() const noexcept;
  bool any() const noexcept { return count() > 0; }
};

/// Unit-scale working copy used by the numeric stages.
using RealImage = Grid<double>;

RealImage to_unit(const GrayImage& img);
/// Scales back to [0,255], rounding half away from zero and clamping.
GrayImage quantize(const RealImage& img);
std::uint8_t quantize_value(double unit_value) noexcept;

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend Point operator+(Point a, Point b) noexcept { return {a.x + b.x, a.y + b.y}; }
  friend Point operator-(Point a, Point b) noexcept { return {a.x - b.x, a.y - b.y}; }
  friend Point operator*(double s, Point p) noexcept { return {s * p.x, s * p.y}; }
  friend bool operator==(Point, Point) = default;
};

inline double dot(Point a, Point b) noexcept { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) noexcept { return a.x * b.y - a.y * b.x; }
inline double norm(Point p) noexcept { return std::hypot(p.x, p.y); }

/// x' = a*x + b*y + tx, y' = c*x + d*y + ty
struct Affine {
  double a = 1.0, b = 0.0, c = 0.0, d = 1.0;
  double tx = 0.0, ty = 0.0;

  static Affine translation(Point t) { return {1.0, 0.0, 0.0, 1.0, t.x, t.y}; }
  /// Counter-clockwise as displayed (y down) by `degrees` about `center`.
  static Affine rotation(double degrees, Point center);

  Point apply(Point p) const noexcept { return {a * p.x + b * p.y + tx, c * p.x + d * p.y + ty}; }
  Point apply_linear(Point p) const noexcept { return {a * p.x + b * p.y, c * p.x + d * p.y}; }
  Affine inverse() const;
  /// (this * other)(p) = this(other(p))
  Affine operator*(const Affine& other) const noexcept;
};

struct Polyline {
  std::vector<Point> points;
  bool closed = false;

  std::size_t size() const noexcept { return points.size(); }
  double length() const noexcept;
  Point centroid() const noexcept;

  friend bool operator==(const Polyline&, const Polyline&) = default;
};

// ---------------------------------------------------------------------------
// Codecs

enum class ImageFormat { png, pgm };

GrayImage decode_image(std::span<const std::uint8_t> bytes, ImageFormat format);
std::vector<std::uint8_t> encode_image(const GrayImage& img, ImageFormat format);

/// Sniffs the magic bytes; throws UnsupportedFormat for anything else.
ImageFormat detect_format(std::span<const std::uint8_t> bytes);
/// Format from a file extension (".png" / ".pgm"), defaulting to png.
ImageFormat format_for_path(const std::string& path);

GrayImage read_image(const std::string& path);
void write_image(const GrayImage& img, const std::string& path);
void write_image(const BinaryMask& mask, const std::string& path);

std::vector<std::uint8_t> read_file(const std::string& path);
void write_file(const std::string& path, std::span<const std::uint8_t> bytes);

// ---------------------------------------------------------------------------
// Binarization

struct Threshold {
  enum class Kind { otsu, fixed };
  Kind kind = Kind::otsu;
  int value = 128;

  static Threshold otsu() { return {Kind::otsu, 0}; }
  static Threshold fixed(int t) { return {Kind::fixed, t}; }
};

struct Binarization {
  BinaryMask mask;
  /// Foreground = intensity >= threshold. 256 means nothing is foreground.
  int threshold = 0;
  /// Set when the histogram has a single occupied bin.
  bool degenerate = false;
};

using Histogram = std::array<std::uint64_t, 256>;

Histogram histogram(const GrayImage& img);

/// Threshold maximizing between-class variance of {< t} vs {>= t}; ties go to
/// the smaller t. Returns 256 for a degenerate histogram.
int otsu_threshold(const Histogram& hist, bool* degenerate = nullptr);

Binarization binarize(const GrayImage& img, Threshold method);

}  // namespace tornmend
