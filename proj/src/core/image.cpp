#include "mpt/core/image.hpp"

#include <png.h>

#include <csetjmp>
#include <cstdio>
#include <memory>
#include <string>

#include "mpt/core/error.hpp"

namespace mpt {

Frame::Frame(int width, int height, Rgb fill, int index)
    : width_(width), height_(height), index_(index), pixels_(static_cast<std::size_t>(width) * height * 3) {
  if (width < 0 || height < 0) throw ShapeError("frame dimensions must be non-negative");
  for (std::size_t i = 0; i < pixels_.size(); i += 3) {
    pixels_[i] = fill.r;
    pixels_[i + 1] = fill.g;
    pixels_[i + 2] = fill.b;
  }
}

RgbaImage::RgbaImage(int width, int height)
    : width_(width), height_(height), data_(static_cast<std::size_t>(width) * height * 4, 0) {
  if (width < 0 || height < 0) throw ShapeError("image dimensions must be non-negative");
}

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const noexcept {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

void write_rows(const std::filesystem::path& path, int width, int height, int channels, const std::uint8_t* data) {
  FilePtr file(std::fopen(path.c_str(), "wb"));
  if (!file) throw IoError("cannot create PNG file", path.string());

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw IoError("libpng initialisation failed", path.string());
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("PNG encoding failed", path.string());
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8,
               channels == 4 ? PNG_COLOR_TYPE_RGBA : PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  // Level 1 without row filters: synthetic frames are mostly flat, so this is
  // both fast and compact.
  png_set_compression_level(png, 1);
  png_set_filter(png, PNG_FILTER_TYPE_BASE, PNG_FILTER_NONE);
  png_write_info(png, info);
  const std::size_t stride = static_cast<std::size_t>(width) * channels;
  for (int y = 0; y < height; ++y) {
    png_write_row(png, const_cast<png_bytep>(data + stride * y));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  if (std::fflush(file.get()) != 0) throw IoError("write failed", path.string());
}

template <typename Image>
void read_into(const std::filesystem::path& path, png_uint_32 format, Image& out, std::uint8_t* (*buffer)(Image&)) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str())) {
    throw IoError(std::string("cannot read PNG: ") + image.message, path.string());
  }
  image.format = format;
  out = Image(static_cast<int>(image.width), static_cast<int>(image.height));
  if (!png_image_finish_read(&image, nullptr, buffer(out), 0, nullptr)) {
    png_image_free(&image);
    throw IoError(std::string("cannot decode PNG: ") + image.message, path.string());
  }
}

}  // namespace

void write_png(const std::filesystem::path& path, const Frame& frame) {
  write_rows(path, frame.width(), frame.height(), 3, frame.bytes().data());
}

void write_png(const std::filesystem::path& path, const RgbaImage& image) {
  write_rows(path, image.width(), image.height(), 4, image.bytes().data());
}

Frame read_png_rgb(const std::filesystem::path& path) {
  Frame frame;
  read_into<Frame>(path, PNG_FORMAT_RGB, frame, [](Frame& f) { return f.bytes().data(); });
  return frame;
}

RgbaImage read_png_rgba(const std::filesystem::path& path) {
  RgbaImage image;
  read_into<RgbaImage>(path, PNG_FORMAT_RGBA, image,
                       [](RgbaImage& im) { return im.width() ? im.pixel(0, 0) : nullptr; });
  return image;
}

}  // namespace mpt
