#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace patchtrack {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};
static_assert(sizeof(Rgb) == 3, "Rgb must be a packed byte triple");

/// Integer pixel rectangle; (x, y) is the top-left corner, 0-based.
struct Rect {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  int right() const { return x + w; }
  int bottom() const { return y + h; }
  bool empty() const { return w <= 0 || h <= 0; }
  long long area() const { return empty() ? 0 : static_cast<long long>(w) * h; }
  friend bool operator==(const Rect&, const Rect&) = default;
};

Rect intersect(const Rect& a, const Rect& b);

/// Real-valued bounding box in pixels (tracker estimates, ground truth).
struct BBox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double center_x() const { return x + w / 2.0; }
  double center_y() const { return y + h / 2.0; }
  friend bool operator==(const BBox&, const BBox&) = default;
};

BBox box_at_center(double cx, double cy, double w, double h);
/// Nearest integer rectangle (corner and size rounded independently).
Rect to_rect(const BBox& box);

/// Owned 8-bit RGB raster, row-major.
class Image {
 public:
  Image() = default;
  Image(int width, int height, Rgb fill = {});
  Image(int width, int height, std::vector<Rgb> pixels);

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return pixels_.empty(); }
  Rect bounds() const { return {0, 0, width_, height_}; }

  const Rgb& at(int x, int y) const { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }
  Rgb& at(int x, int y) { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }

  std::span<const Rgb> pixels() const { return pixels_; }
  std::span<const Rgb> row(int y) const {
    return std::span<const Rgb>(pixels_).subspan(static_cast<std::size_t>(y) * width_, width_);
  }
  /// Interleaved r,g,b bytes of one row.
  std::span<const std::uint8_t> row_bytes(int y) const;

  void fill(const Rect& rect, Rgb color);

  friend bool operator==(const Image&, const Image&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<Rgb> pixels_;
};

/// Decodes an 8-bit PNG or baseline/progressive JPEG. Grayscale sources are
/// expanded to r = g = b. Throws Error(DecodeError).
Image decode_image(std::span<const std::uint8_t> bytes);
Image load_image(const std::filesystem::path& path);

std::vector<std::uint8_t> encode_png(const Image& img);
void save_png(const Image& img, const std::filesystem::path& path);

/// Clamps `box` to the image and copies that region. Throws
/// Error(EmptyRegion) when the intersection is empty.
Image crop(const Image& img, const Rect& box);

/// BT.601 luma, 0.299 r + 0.587 g + 0.114 b, unrounded. Evaluated as an
/// exact integer sum scaled by 1/1000 so luminance(x, x, x) == x exactly.
double luminance(std::uint8_t r, std::uint8_t g, std::uint8_t b);
inline double luminance(const Rgb& p) { return luminance(p.r, p.g, p.b); }

/// 1000 * luminance, exact integer in [0, 255000].
inline std::int32_t luma1000(const Rgb& p) { return 299 * p.r + 587 * p.g + 114 * p.b; }

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace patchtrack
