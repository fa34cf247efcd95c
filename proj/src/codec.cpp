#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <memory>
#include <string>

#include "tornmend/raster.hpp"

namespace tornmend {
namespace {

// 601 luma, rounded to nearest.
std::uint8_t luminance(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  const double y = 0.299 * r + 0.587 * g + 0.114 * b;
  return static_cast<std::uint8_t>(std::clamp(std::round(y), 0.0, 255.0));
}

struct PngImageGuard {
  png_image* image;
  ~PngImageGuard() { png_image_free(image); }
};

GrayImage decode_png(std::span<const std::uint8_t> bytes) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  PngImageGuard guard{&image};
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size()))
    throw Error(ErrorCode::MalformedFile, std::string("png header: ") + image.message);
  if (image.width == 0 || image.height == 0) throw Error(ErrorCode::MalformedFile, "png has zero extent");

  const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
  image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  const int w = static_cast<int>(image.width);
  const int h = static_cast<int>(image.height);
  std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(image));
  // Alpha (if any) is composited onto white, the paper colour.
  png_color white{255, 255, 255};
  if (!png_image_finish_read(&image, &white, buffer.data(), 0, nullptr))
    throw Error(ErrorCode::MalformedFile, std::string("png payload: ") + image.message);

  if (!color) return GrayImage(w, h, std::move(buffer));
  GrayImage out(w, h);
  for (std::size_t i = 0; i < out.size(); ++i)
    out.data()[i] = luminance(buffer[3 * i], buffer[3 * i + 1], buffer[3 * i + 2]);
  return out;
}

std::vector<std::uint8_t> encode_png(const GrayImage& img) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width());
  image.height = static_cast<png_uint_32>(img.height());
  image.format = PNG_FORMAT_GRAY;
  PngImageGuard guard{&image};

  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&image, nullptr, &size, 0, img.data().data(), 0, nullptr))
    throw Error(ErrorCode::Io, std::string("png encode: ") + image.message);
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&image, out.data(), &size, 0, img.data().data(), 0, nullptr))
    throw Error(ErrorCode::Io, std::string("png encode: ") + image.message);
  out.resize(size);
  return out;
}

class PgmReader {
 public:
  explicit PgmReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  int next_int() {
    skip_space_and_comments();
    if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) throw Error(ErrorCode::MalformedFile, "pgm header");
    long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_++] - '0');
      if (value > 1'000'000) throw Error(ErrorCode::MalformedFile, "pgm header value out of range");
    }
    return static_cast<int>(value);
  }

  void expect_single_space() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) throw Error(ErrorCode::MalformedFile, "pgm header");
    ++pos_;
  }

  std::size_t pos() const { return pos_; }
  void skip(std::size_t n) { pos_ += n; }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

GrayImage decode_pgm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P') throw Error(ErrorCode::MalformedFile, "missing pgm magic");
  if (bytes[1] != '5') throw Error(ErrorCode::UnsupportedFormat, "only binary P5 pgm is supported");
  PgmReader reader(bytes);
  reader.skip(2);
  const int w = reader.next_int();
  const int h = reader.next_int();
  const int maxval = reader.next_int();
  reader.expect_single_space();
  if (w <= 0 || h <= 0) throw Error(ErrorCode::MalformedFile, "pgm has zero extent");
  if (maxval <= 0) throw Error(ErrorCode::MalformedFile, "pgm maxval");
  if (maxval > 255) throw Error(ErrorCode::UnsupportedFormat, "16-bit pgm");

  const std::size_t need = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  if (bytes.size() - reader.pos() < need)
    throw Error(ErrorCode::MalformedFile, "pgm payload is " + std::to_string(bytes.size() - reader.pos()) +
                                              " bytes, header needs " + std::to_string(need));
  GrayImage out(w, h);
  const auto* payload = bytes.data() + reader.pos();
  for (std::size_t i = 0; i < need; ++i) {
    const int v = std::min<int>(payload[i], maxval);
    out.data()[i] = maxval == 255 ? static_cast<std::uint8_t>(v)
                                  : static_cast<std::uint8_t>(std::lround(255.0 * v / maxval));
  }
  return out;
}

std::vector<std::uint8_t> encode_pgm(const GrayImage& img) {
  const std::string header = "P5\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), img.data().begin(), img.data().end());
  return out;
}

}  // namespace

GrayImage decode_image(std::span<const std::uint8_t> bytes, ImageFormat format) {
  return format == ImageFormat::png ? decode_png(bytes) : decode_pgm(bytes);
}

std::vector<std::uint8_t> encode_image(const GrayImage& img, ImageFormat format) {
  if (img.empty()) throw Error(ErrorCode::InvalidArgument, "cannot encode an empty image");
  return format == ImageFormat::png ? encode_png(img) : encode_pgm(img);
}

ImageFormat detect_format(std::span<const std::uint8_t> bytes) {
  static constexpr std::uint8_t kPngMagic[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (bytes.size() >= 8 && std::equal(std::begin(kPngMagic), std::end(kPngMagic), bytes.begin()))
    return ImageFormat::png;
  if (bytes.size() >= 2 && bytes[0] == 'P' && std::isdigit(bytes[1])) return ImageFormat::pgm;
  throw Error(ErrorCode::UnsupportedFormat, "not a png or pgm file");
}

ImageFormat format_for_path(const std::string& path) {
  auto dot = path.rfind('.');
  if (dot == std::string::npos) return ImageFormat::png;
  std::string ext = path.substr(dot + 1);
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == "pgm" ? ImageFormat::pgm : ImageFormat::png;
}

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::Io, "short write to " + path);
}

GrayImage read_image(const std::string& path) {
  const auto bytes = read_file(path);
  return decode_image(bytes, detect_format(bytes));
}

void write_image(const GrayImage& img, const std::string& path) {
  write_file(path, encode_image(img, format_for_path(path)));
}

void write_image(const BinaryMask& mask, const std::string& path) {
  GrayImage img(mask.width(), mask.height());
  std::transform(mask.data().begin(), mask.data().end(), img.data().begin(),
                 [](std::uint8_t v) { return static_cast<std::uint8_t>(v ? 255 : 0); });
  write_image(img, path);
}

}  // namespace tornmend
