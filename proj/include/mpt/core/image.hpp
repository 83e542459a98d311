#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace mpt {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  bool operator==(const Rgb&) const = default;
};

/// Interleaved 8-bit RGB raster plus its 1-based position in the video.
class Frame {
 public:
  Frame() = default;
  Frame(int width, int height, Rgb fill = {}, int index = 1);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int index() const noexcept { return index_; }
  void set_index(int index) noexcept { index_ = index; }
  bool empty() const noexcept { return width_ == 0 || height_ == 0; }

  std::span<std::uint8_t> bytes() noexcept { return pixels_; }
  std::span<const std::uint8_t> bytes() const noexcept { return pixels_; }

  std::uint8_t* pixel(int x, int y) noexcept { return pixels_.data() + 3 * (static_cast<std::size_t>(y) * width_ + x); }
  const std::uint8_t* pixel(int x, int y) const noexcept {
    return pixels_.data() + 3 * (static_cast<std::size_t>(y) * width_ + x);
  }
  Rgb at(int x, int y) const noexcept {
    const auto* p = pixel(x, y);
    return {p[0], p[1], p[2]};
  }
  void set(int x, int y, Rgb c) noexcept {
    auto* p = pixel(x, y);
    p[0] = c.r;
    p[1] = c.g;
    p[2] = c.b;
  }
  bool same_size(const Frame& o) const noexcept { return width_ == o.width_ && height_ == o.height_; }

  /// Pixel equality; the index is metadata and is not compared.
  bool operator==(const Frame& o) const { return same_size(o) && pixels_ == o.pixels_; }

 private:
  int width_ = 0;
  int height_ = 0;
  int index_ = 1;
  std::vector<std::uint8_t> pixels_;
};

/// Interleaved 8-bit RGBA raster (sprites).
class RgbaImage {
 public:
  RgbaImage() = default;
  RgbaImage(int width, int height);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::uint8_t* pixel(int x, int y) noexcept { return data_.data() + 4 * (static_cast<std::size_t>(y) * width_ + x); }
  const std::uint8_t* pixel(int x, int y) const noexcept {
    return data_.data() + 4 * (static_cast<std::size_t>(y) * width_ + x);
  }
  std::uint8_t alpha(int x, int y) const noexcept { return pixel(x, y)[3]; }
  std::span<const std::uint8_t> bytes() const noexcept { return data_; }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> data_;
};

/// Alpha at or above this value counts as an opaque sprite pixel for boxes and visibility.
inline constexpr std::uint8_t kOpaqueAlpha = 128;

// PNG codec. Writes are deterministic for identical pixels (fixed zlib settings).
void write_png(const std::filesystem::path& path, const Frame& frame);
void write_png(const std::filesystem::path& path, const RgbaImage& image);
Frame read_png_rgb(const std::filesystem::path& path);
RgbaImage read_png_rgba(const std::filesystem::path& path);

}  // namespace mpt
