#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>

#include "mpt/core/error.hpp"
#include "mpt/features/features.hpp"

namespace mpt::features {

FeatureGrid::FeatureGrid(int cols, int rows, int stride, int dim)
    : cols_(cols), rows_(rows), stride_(stride), dim_(dim),
      values_(static_cast<std::size_t>(cols) * rows * dim, 0.0) {
  if (cols < 0 || rows < 0 || stride < 1 || dim < 1) throw ShapeError("invalid feature grid shape");
}

bool FeaturePyramid::same_shape(const FeaturePyramid& o) const {
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (!levels[i].same_shape(o.levels[i])) return false;
  }
  return true;
}

ResidualPyramid ResidualPyramid::zeros_like(const FeaturePyramid& p) {
  ResidualPyramid r;
  for (std::size_t i = 0; i < 3; ++i) {
    const FeatureGrid& g = p.levels[i];
    r.levels[i] = FeatureGrid(g.cols(), g.rows(), g.stride(), g.dim());
  }
  return r;
}

double l2_norm(std::span<const double> v) {
  double s = 0.0;
  for (const double x : v) s += x * x;
  return std::sqrt(s);
}

namespace {

// Separable per-axis weights of every cell's receptive field at one scale.
struct AxisWeights {
  std::vector<int> start;               // first pixel of each cell's window
  std::vector<std::vector<double>> w;   // weights over the clipped window
  std::vector<double> total;            // sum of w
};

AxisWeights axis_weights(int cells, int stride, int factor, int extent, Aggregation mode) {
  AxisWeights a;
  const double half = 0.5 * factor * stride;
  for (int c = 0; c < cells; ++c) {
    const Window win = receptive_field(c, 0, stride, factor, extent, stride);
    const double centre = c * stride + 0.5 * stride;
    std::vector<double> w;
    double total = 0.0;
    for (int x = win.x0; x < win.x1; ++x) {
      const double v = mode == Aggregation::Tent ? 1.0 - std::abs(x + 0.5 - centre) / half : 1.0;
      w.push_back(v);
      total += v;
    }
    a.start.push_back(win.x0);
    a.w.push_back(std::move(w));
    a.total.push_back(total);
  }
  return a;
}

class Aggregator {
 public:
  Aggregator(int w, int h, const ExtractorConfig& config) : w_(w), h_(h) {
    for (const Scale s : kScales) {
      const int stride = stride_of(s);
      const std::size_t i = static_cast<std::size_t>(s);
      x_[i] = axis_weights((w + stride - 1) / stride, stride, config.field_factor, w, config.aggregation);
      y_[i] = axis_weights((h + stride - 1) / stride, stride, config.field_factor, h, config.aggregation);
    }
  }

  // Weighted means in row-major cell order.
  std::vector<double> operator()(const std::vector<double>& v, Scale s) const {
    const AxisWeights& ax = x_[static_cast<std::size_t>(s)];
    const AxisWeights& ay = y_[static_cast<std::size_t>(s)];
    const std::size_t cols = ax.start.size();
    const std::size_t rows = ay.start.size();
    std::vector<double> horizontal(static_cast<std::size_t>(h_) * cols);
    for (int y = 0; y < h_; ++y) {
      const double* row = v.data() + static_cast<std::size_t>(y) * w_;
      for (std::size_t cx = 0; cx < cols; ++cx) {
        const double* p = row + ax.start[cx];
        double acc = 0.0;
        for (std::size_t k = 0; k < ax.w[cx].size(); ++k) acc += ax.w[cx][k] * p[k];
        horizontal[static_cast<std::size_t>(y) * cols + cx] = acc;
      }
    }
    std::vector<double> out(rows * cols);
    for (std::size_t cy = 0; cy < rows; ++cy) {
      for (std::size_t cx = 0; cx < cols; ++cx) {
        double acc = 0.0;
        for (std::size_t k = 0; k < ay.w[cy].size(); ++k) {
          acc += ay.w[cy][k] * horizontal[(static_cast<std::size_t>(ay.start[cy]) + k) * cols + cx];
        }
        out[cy * cols + cx] = acc / (ax.total[cx] * ay.total[cy]);
      }
    }
    return out;
  }

 private:
  int w_, h_;
  std::array<AxisWeights, 3> x_, y_;
};


}  // namespace

Window receptive_field(int cx, int cy, int stride, int factor, int w, int h) {
  // Centred on the cell centre cx * stride + stride / 2.
  const int lo = stride / 2 - factor * stride / 2;
  const int hi = stride / 2 + factor * stride / 2;
  return {std::max(0, cx * stride + lo), std::max(0, cy * stride + lo), std::min(w, cx * stride + hi),
          std::min(h, cy * stride + hi)};
}

namespace {

int orientation_bin(double gx, double gy) {
  double theta = std::atan2(gy, gx);
  if (theta < 0.0) theta += 2.0 * std::numbers::pi;
  // Bins are centred on multiples of 45 degrees so axis-aligned edges never sit on a boundary.
  const int bin = static_cast<int>(std::floor((theta + std::numbers::pi / 8.0) / (std::numbers::pi / 4.0)));
  return bin % kOrientationBins;
}

}  // namespace

FeaturePyramid extract_pyramid(const Frame& frame, const ExtractorConfig& config) {
  if (config.field_factor < 1) throw ValidationError("field_factor must be >= 1");
  const int W = frame.width();
  const int H = frame.height();
  if (W < kDeepStride * 2 || H < kDeepStride * 2) {
    throw ShapeError("frame must be at least 16x16 for feature extraction, got " + std::to_string(W) + "x" +
                     std::to_string(H));
  }

  const std::size_t n = static_cast<std::size_t>(W) * H;
  std::vector<double> lum(n);
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      const std::uint8_t* p = frame.pixel(x, y);
      lum[static_cast<std::size_t>(y) * W + x] = (0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2]) / 255.0;
    }
  }
  std::vector<double> mag(n);
  std::vector<std::uint8_t> bin(n);
  for (int y = 0; y < H; ++y) {
    const int ym = std::max(0, y - 1);
    const int yp = std::min(H - 1, y + 1);
    for (int x = 0; x < W; ++x) {
      const int xm = std::max(0, x - 1);
      const int xp = std::min(W - 1, x + 1);
      const double gx = 0.5 * (lum[static_cast<std::size_t>(y) * W + xp] - lum[static_cast<std::size_t>(y) * W + xm]);
      const double gy = 0.5 * (lum[static_cast<std::size_t>(yp) * W + x] - lum[static_cast<std::size_t>(ym) * W + x]);
      const std::size_t i = static_cast<std::size_t>(y) * W + x;
      mag[i] = std::hypot(gx, gy);
      bin[i] = static_cast<std::uint8_t>(mag[i] > 0.0 ? orientation_bin(gx, gy) : 0);
    }
  }

  FeaturePyramid pyr;
  for (const Scale s : kScales) {
    const int stride = stride_of(s);
    pyr.level(s) = FeatureGrid((W + stride - 1) / stride, (H + stride - 1) / stride, stride);
  }

  // Per-cell weighted mean of one per-pixel channel at every scale.
  const Aggregator aggregate(W, H, config);
  const auto fill = [&](int channel, double gain, const std::vector<double>& values) {
    for (const Scale s : kScales) {
      FeatureGrid& g = pyr.level(s);
      const std::vector<double> means = aggregate(values, s);
      std::size_t k = 0;
      for (int cy = 0; cy < g.rows(); ++cy) {
        for (int cx = 0; cx < g.cols(); ++cx, ++k) g.cell(cx, cy)[static_cast<std::size_t>(channel)] = gain * means[k];
      }
    }
  };

  std::vector<double> values(n);
  for (int b = 0; b < kOrientationBins; ++b) {
    for (std::size_t i = 0; i < n; ++i) values[i] = bin[i] == b ? mag[i] : 0.0;
    fill(b, config.gradient_gain, values);
  }
  for (int c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < n; ++i) values[i] = frame.bytes()[3 * i + static_cast<std::size_t>(c)] / 255.0 - 0.5;
    fill(kColorOffset + c, config.color_gain, values);
  }
  // Contrast = weighted standard deviation of luminance.
  for (std::size_t i = 0; i < n; ++i) values[i] = lum[i] * lum[i];
  for (const Scale s : kScales) {
    FeatureGrid& g = pyr.level(s);
    const std::vector<double> m1 = aggregate(lum, s);
    const std::vector<double> m2 = aggregate(values, s);
    std::size_t k = 0;
    for (int cy = 0; cy < g.rows(); ++cy) {
      for (int cx = 0; cx < g.cols(); ++cx, ++k) {
        const double var = m2[k] - m1[k] * m1[k];
        // Variances below rounding noise are treated as flat.
        g.cell(cx, cy)[kContrastIndex] = var > 1e-12 ? config.contrast_gain * std::sqrt(var) : 0.0;
      }
    }
  }
  return pyr;
}

FeaturePyramid normalize(const FeaturePyramid& pyramid) {
  FeaturePyramid out = pyramid;
  for (auto& g : out.levels) {
    for (int cy = 0; cy < g.rows(); ++cy) {
      for (int cx = 0; cx < g.cols(); ++cx) {
        auto c = g.cell(cx, cy);
        const double n = l2_norm(c);
        if (n > 0.0) {
          for (double& v : c) v /= n;
        }
      }
    }
  }
  return out;
}

void write_grid_dump(const std::filesystem::path& path, const FeatureGrid& grid) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot create grid dump", path.string());
  const auto put_u32 = [&out](std::uint32_t v) {
    const unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                                static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    out.write(reinterpret_cast<const char*>(b), 4);
  };
  out.write("MPTF", 4);
  put_u32(static_cast<std::uint32_t>(grid.cols()));
  put_u32(static_cast<std::uint32_t>(grid.rows()));
  put_u32(static_cast<std::uint32_t>(grid.dim()));
  static_assert(sizeof(double) == 8);
  for (const double v : grid.values()) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(bits >> (8 * i));
    out.write(reinterpret_cast<const char*>(b), 8);
  }
  if (!out) throw IoError("write failed", path.string());
}

FeatureGrid read_grid_dump(const std::filesystem::path& path, int stride) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open grid dump", path.string());
  unsigned char header[16];
  if (!in.read(reinterpret_cast<char*>(header), 16) || std::memcmp(header, "MPTF", 4) != 0) {
    throw IoError("not a feature grid dump", path.string());
  }
  const auto u32 = [&header](int off) {
    return static_cast<int>(header[off] | (header[off + 1] << 8) | (header[off + 2] << 16) |
                            (static_cast<std::uint32_t>(header[off + 3]) << 24));
  };
  FeatureGrid grid(u32(4), u32(8), stride, u32(12));
  for (double& v : grid.values()) {
    unsigned char b[8];
    if (!in.read(reinterpret_cast<char*>(b), 8)) throw IoError("truncated grid dump", path.string());
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    std::memcpy(&v, &bits, 8);
  }
  return grid;
}

}  // namespace mpt::features
