#include <algorithm>
#include <cstdlib>

#include "mpt/core/error.hpp"
#include "mpt/features/features.hpp"

namespace mpt::features {

std::vector<std::uint8_t> foreground_mask(const Frame& frame, const Frame& background_model, int threshold) {
  if (!frame.same_size(background_model)) {
    throw ShapeError("background model is " + std::to_string(background_model.width()) + "x" +
                     std::to_string(background_model.height()) + " but frame is " + std::to_string(frame.width()) +
                     "x" + std::to_string(frame.height()));
  }
  const auto a = frame.bytes();
  const auto b = background_model.bytes();
  std::vector<std::uint8_t> mask(a.size() / 3, 0);
  for (std::size_t i = 0; i < mask.size(); ++i) {
    int d = 0;
    for (std::size_t c = 0; c < 3; ++c) d = std::max(d, std::abs(int(a[3 * i + c]) - int(b[3 * i + c])));
    mask[i] = d > threshold ? 1 : 0;
  }
  return mask;
}

ResidualPyramid predict_residual(const Frame& frame, const FeaturePyramid& pyramid, const Frame& background_model,
                                 const CorrectionConfig& config, const ExtractorConfig& extractor) {
  if (config.suppression < 0.0 || config.suppression > 1.0) throw ValidationError("suppression must be in [0,1]");
  const std::vector<std::uint8_t> mask = foreground_mask(frame, background_model, config.foreground_threshold);
  const int W = frame.width();
  const int H = frame.height();

  Frame masked = frame;
  std::size_t fg_pixels = 0;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) {
      ++fg_pixels;
      continue;
    }
    masked.bytes()[3 * i] = masked.bytes()[3 * i + 1] = masked.bytes()[3 * i + 2] = kMaskFill;
  }
  // Re-extraction is skipped when no pixel is foreground: every cell is then a
  // suppressed background cell.
  FeaturePyramid fg_desc;
  if (fg_pixels > 0) fg_desc = extract_pyramid(masked, extractor);

  // Foreground counts per pixel as a summed-area table, for per-cell occupancy.
  std::vector<long> sat(static_cast<std::size_t>(W + 1) * (H + 1), 0);
  for (int y = 0; y < H; ++y) {
    long row = 0;
    for (int x = 0; x < W; ++x) {
      row += mask[static_cast<std::size_t>(y) * W + x];
      sat[static_cast<std::size_t>(y + 1) * (W + 1) + x + 1] = sat[static_cast<std::size_t>(y) * (W + 1) + x + 1] + row;
    }
  }
  const auto occupied = [&](int x0, int y0, int x1, int y1) {
    const auto at = [&](int x, int y) { return sat[static_cast<std::size_t>(y) * (W + 1) + x]; };
    return at(x1, y1) - at(x0, y1) - at(x1, y0) + at(x0, y0) > 0;
  };

  ResidualPyramid residual = ResidualPyramid::zeros_like(pyramid);
  for (const Scale s : kScales) {
    const std::size_t li = static_cast<std::size_t>(s);
    const FeatureGrid& main = pyramid.level(s);
    const int stride = stride_of(s);
    if (main.cols() != (W + stride - 1) / stride || main.rows() != (H + stride - 1) / stride ||
        main.stride() != stride) {
      throw ShapeError("pyramid does not match frame dimensions");
    }
    if (!config.levels[li]) continue;
    FeatureGrid& out = residual.level(s);
    for (int cy = 0; cy < main.rows(); ++cy) {
      for (int cx = 0; cx < main.cols(); ++cx) {
        const auto [x0, y0, x1, y1] = receptive_field(cx, cy, stride, extractor.field_factor, W, H);
        const auto p = main.cell(cx, cy);
        auto r = out.cell(cx, cy);
        const auto m = fg_pixels > 0 ? fg_desc.level(s).cell(cx, cy) : p;
        const double m_norm = fg_pixels > 0 ? l2_norm(m) : 0.0;
        if (m_norm > 0.0 && occupied(x0, y0, x1, y1)) {
          // The masked descriptor, rescaled to the main descriptor's energy.
          const double gain = l2_norm(p) / m_norm;
          for (std::size_t k = 0; k < r.size(); ++k) r[k] = gain * m[k] - p[k];
        } else {
          for (std::size_t k = 0; k < r.size(); ++k) r[k] = -config.suppression * p[k];
        }
      }
    }
  }
  return residual;
}

FeaturePyramid correct_deviation(const FeaturePyramid& pyramid, const ResidualPyramid& residual) {
  for (std::size_t i = 0; i < 3; ++i) {
    if (!pyramid.levels[i].same_shape(residual.levels[i])) throw ShapeError("residual shape does not match pyramid");
  }
  FeaturePyramid out = pyramid;
  for (std::size_t i = 0; i < 3; ++i) {
    FeatureGrid& g = out.levels[i];
    const FeatureGrid& r = residual.levels[i];
    for (int cy = 0; cy < g.rows(); ++cy) {
      for (int cx = 0; cx < g.cols(); ++cx) {
        auto v = g.cell(cx, cy);
        const double source_norm = l2_norm(v);
        const auto dr = r.cell(cx, cy);
        for (std::size_t k = 0; k < v.size(); ++k) v[k] += dr[k];
        const double scale = std::max(source_norm, l2_norm(v));
        if (scale > 0.0) {
          for (double& x : v) x /= scale;
        } else {
          std::fill(v.begin(), v.end(), 0.0);
        }
      }
    }
  }
  return out;
}

}  // namespace mpt::features
