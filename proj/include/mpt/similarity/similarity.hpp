#pragma once

#include <ostream>
#include <vector>

#include "mpt/core/geometry.hpp"
#include "mpt/features/features.hpp"

namespace mpt::similarity {

struct CellIndex {
  int x = 0;
  int y = 0;
  bool operator==(const CellIndex&) const = default;
};

struct Displacement {
  int dx = 0;
  int dy = 0;
  bool operator==(const Displacement&) const = default;
};

/// Square window of scores over displacements |d|_inf <= radius, measured in
/// cells of a grid with the given stride.
class SimilarityMap {
 public:
  SimilarityMap() = default;
  SimilarityMap(int radius, int stride, double fill = 0.0);

  int radius() const noexcept { return radius_; }
  int stride() const noexcept { return stride_; }
  int side() const noexcept { return 2 * radius_ + 1; }
  bool empty() const noexcept { return values_.empty(); }

  double at(int dx, int dy) const { return values_[index(dx, dy)]; }
  double& at(int dx, int dy) { return values_[index(dx, dy)]; }
  const std::vector<double>& values() const noexcept { return values_; }

 private:
  std::size_t index(int dx, int dy) const {
    return static_cast<std::size_t>(dy + radius_) * side() + static_cast<std::size_t>(dx + radius_);
  }
  int radius_ = 0;
  int stride_ = 1;
  std::vector<double> values_;
};

/// Cell of `grid` containing pixel `p`, clamped to the grid.
CellIndex cell_of(const features::FeatureGrid& grid, Point2 p);

/// map[d] = <prev[anchor], cur[anchor + d]> for |d|_inf <= radius; displacements
/// leaving the grid score -1. On normalised descriptors the inner product is the
/// cosine similarity, and it keeps corrected cells' reduced length visible.
/// Throws ShapeError when the grids differ or the anchor is outside the grid.
SimilarityMap scale_similarity(const features::FeatureGrid& prev, const features::FeatureGrid& cur, CellIndex anchor,
                               int radius);

/// Resampling onto a coarser lattice: target displacement d (in target cells)
/// takes the maximum of the source over displacements within half a target cell
/// of round(d * target_stride / source_stride), so a source peak between lattice
/// points is kept at the nearest one.
/// Throws ShapeError when the source window does not cover the target window.
SimilarityMap resample(const SimilarityMap& map, int target_stride, int target_radius);

/// Unweighted sum deep + mid + shallow on the deep lattice. Mid and shallow maps
/// may be given at their own stride and are resampled first. Throws ShapeError on
/// lattice mismatch.
SimilarityMap fuse_similarity(const SimilarityMap& deep, const SimilarityMap& mid, const SimilarityMap& shallow);

/// Argmax with ties broken by smallest |d|_2, then (dy, dx) lexicographically.
Displacement argmax_displacement(const SimilarityMap& map);

/// Argmax displacement of a fused map in pixels (cells * stride).
Point2 predict_offset(const SimilarityMap& fused);

struct FusionConfig {
  int radius = 4;           ///< deep cells; 32 px at stride 8
  bool multi_scale = true;  ///< false: deep-scale similarity only
};

struct SimilarityVolume {
  CellIndex anchor;  ///< deep cell of the target in frame t-1
  int radius = 0;
  SimilarityMap deep;
  SimilarityMap mid;      ///< empty when multi_scale is off
  SimilarityMap shallow;  ///< empty when multi_scale is off
  SimilarityMap fused;
  int scales = 1;  ///< number of maps summed into `fused`

  /// Fused score at the deep cell containing pixel `p`, or -scales outside the window.
  double at_pixel(Point2 p) const;
};

/// Per-target volume anchored at pixel `center` of frame t-1.
SimilarityVolume compute_volume(const features::FeaturePyramid& prev, const features::FeaturePyramid& cur,
                                Point2 center, const FusionConfig& config = {});

/// Text matrix, one row per dy, for debugging.
void write_map_text(std::ostream& out, const SimilarityMap& map);

}  // namespace mpt::similarity
