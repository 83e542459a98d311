#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <vector>

#include "mpt/core/image.hpp"

namespace mpt::features {

/// Pyramid levels, finest first.
enum class Scale : int { Shallow = 0, Mid = 1, Deep = 2 };
inline constexpr std::array<Scale, 3> kScales = {Scale::Shallow, Scale::Mid, Scale::Deep};
inline constexpr std::array<int, 3> kStrides = {2, 4, 8};
inline constexpr int stride_of(Scale s) { return kStrides[static_cast<std::size_t>(s)]; }
inline constexpr int kDeepStride = 8;

/// Descriptor layout: 8 gradient-orientation bins, mean R, G, B, local contrast.
inline constexpr int kDescriptorDim = 12;
inline constexpr int kOrientationBins = 8;
inline constexpr int kColorOffset = 8;
inline constexpr int kContrastIndex = 11;

/// Row-major grid of fixed-length descriptors at one stride.
class FeatureGrid {
 public:
  FeatureGrid() = default;
  FeatureGrid(int cols, int rows, int stride, int dim = kDescriptorDim);

  int cols() const noexcept { return cols_; }
  int rows() const noexcept { return rows_; }
  int stride() const noexcept { return stride_; }
  int dim() const noexcept { return dim_; }
  bool contains(int cx, int cy) const noexcept { return cx >= 0 && cy >= 0 && cx < cols_ && cy < rows_; }
  bool same_shape(const FeatureGrid& o) const noexcept {
    return cols_ == o.cols_ && rows_ == o.rows_ && stride_ == o.stride_ && dim_ == o.dim_;
  }

  std::span<double> cell(int cx, int cy) noexcept {
    return {values_.data() + (static_cast<std::size_t>(cy) * cols_ + cx) * dim_, static_cast<std::size_t>(dim_)};
  }
  std::span<const double> cell(int cx, int cy) const noexcept {
    return {values_.data() + (static_cast<std::size_t>(cy) * cols_ + cx) * dim_, static_cast<std::size_t>(dim_)};
  }
  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }

 private:
  int cols_ = 0;
  int rows_ = 0;
  int stride_ = 1;
  int dim_ = kDescriptorDim;
  std::vector<double> values_;
};

/// Three-scale descriptor grids; grid dims are ceil(frame_dim / stride).
struct FeaturePyramid {
  std::array<FeatureGrid, 3> levels;

  FeatureGrid& level(Scale s) { return levels[static_cast<std::size_t>(s)]; }
  const FeatureGrid& level(Scale s) const { return levels[static_cast<std::size_t>(s)]; }
  bool same_shape(const FeaturePyramid& o) const;
};

/// Additive corrections, shape-compatible with the pyramid they were predicted for.
struct ResidualPyramid {
  std::array<FeatureGrid, 3> levels;

  FeatureGrid& level(Scale s) { return levels[static_cast<std::size_t>(s)]; }
  const FeatureGrid& level(Scale s) const { return levels[static_cast<std::size_t>(s)]; }
  static ResidualPyramid zeros_like(const FeaturePyramid& p);
};

/// Receptive-field weighting: uniform, or a separable tent peaking at the cell centre.
enum class Aggregation { Box, Tent };

struct ExtractorConfig {
  /// Gradient bins hold gain * mean gradient magnitude per orientation; the gain
  /// brings edge energy to the same order as the colour channels.
  double gradient_gain = 8.0;
  /// Colour channels hold gain * (mean channel / 255 - 0.5), colour relative to mid-grey.
  double color_gain = 1.0;
  double contrast_gain = 2.0;
  /// Receptive-field side as a multiple of the stride, centred on the cell.
  int field_factor = 4;
  Aggregation aggregation = Aggregation::Tent;
};

/// Value that pixels outside the foreground take in the masked frame: mid-grey,
/// which has zero colour response.
inline constexpr std::uint8_t kMaskFill = 128;

/// Pixel window [x0, x1) x [y0, y1) aggregated by cell (cx, cy), clipped to a w x h frame.
struct Window {
  int x0, y0, x1, y1;
  double count() const { return static_cast<double>(x1 - x0) * (y1 - y0); }
};
Window receptive_field(int cx, int cy, int stride, int field_factor, int w, int h);

/// Each cell takes a weighted mean over a field_factor*stride square receptive
/// field centred on the cell (clipped to the frame). Throws ShapeError for frames smaller than 16x16.
FeaturePyramid extract_pyramid(const Frame& frame, const ExtractorConfig& config = {});

struct CorrectionConfig {
  double suppression = 0.8;      ///< lambda: share of a pure-background descriptor removed
  int foreground_threshold = 25;  ///< max-channel |frame - background| above this is foreground
  std::array<bool, 3> levels{true, true, true};  ///< scales the residual is applied to
};

/// Foreground mask (1 = foreground) from thresholded max-channel difference.
std::vector<std::uint8_t> foreground_mask(const Frame& frame, const Frame& background_model, int threshold);

/// Auxiliary pass over (frame, features). Cells whose receptive field holds
/// foreground get (|p| / |m|) * m - p, where m is the descriptor re-extracted on
/// the foreground-masked frame, so the corrected cell points along m. Cells
/// without foreground get -lambda * p. Throws ShapeError on dimension mismatch.
ResidualPyramid predict_residual(const Frame& frame, const FeaturePyramid& pyramid, const Frame& background_model,
                                 const CorrectionConfig& config = {}, const ExtractorConfig& extractor = {});

/// corrected = (p + r) / max(|p|, |p + r|) per cell, zero stays zero.
/// With r = 0 this is plain per-cell L2 normalisation; a residual can shrink a
/// cell below unit length but never grow it past one.
FeaturePyramid correct_deviation(const FeaturePyramid& pyramid, const ResidualPyramid& residual);

/// Per-cell L2 normalisation (zero vectors stay zero).
FeaturePyramid normalize(const FeaturePyramid& pyramid);

double l2_norm(std::span<const double> v);

/// Debug dump: 16-byte header ("MPTF", cols, rows, dim as little-endian u32) then
/// float64 values in row-major cell order.
void write_grid_dump(const std::filesystem::path& path, const FeatureGrid& grid);
FeatureGrid read_grid_dump(const std::filesystem::path& path, int stride);

}  // namespace mpt::features
