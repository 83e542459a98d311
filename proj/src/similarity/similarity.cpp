#include "mpt/similarity/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <tuple>

#include "mpt/core/error.hpp"

namespace mpt::similarity {

using features::FeatureGrid;
using features::FeaturePyramid;
using features::Scale;

SimilarityMap::SimilarityMap(int radius, int stride, double fill)
    : radius_(radius), stride_(stride), values_(static_cast<std::size_t>(2 * radius + 1) * (2 * radius + 1), fill) {
  if (radius < 0 || stride < 1) throw ShapeError("invalid similarity map shape");
}

CellIndex cell_of(const FeatureGrid& grid, Point2 p) {
  const int cx = static_cast<int>(std::floor(p.x / grid.stride()));
  const int cy = static_cast<int>(std::floor(p.y / grid.stride()));
  return {std::clamp(cx, 0, grid.cols() - 1), std::clamp(cy, 0, grid.rows() - 1)};
}

SimilarityMap scale_similarity(const FeatureGrid& prev, const FeatureGrid& cur, CellIndex anchor, int radius) {
  if (!prev.same_shape(cur)) throw ShapeError("similarity needs grids of identical shape and stride");
  if (!prev.contains(anchor.x, anchor.y)) {
    throw ShapeError("anchor (" + std::to_string(anchor.x) + "," + std::to_string(anchor.y) + ") outside grid");
  }
  SimilarityMap map(radius, prev.stride(), -1.0);
  const auto ref = prev.cell(anchor.x, anchor.y);
  for (int dy = -radius; dy <= radius; ++dy) {
    for (int dx = -radius; dx <= radius; ++dx) {
      const int x = anchor.x + dx;
      const int y = anchor.y + dy;
      if (!cur.contains(x, y)) continue;
      const auto c = cur.cell(x, y);
      double dot = 0.0;
      for (std::size_t k = 0; k < ref.size(); ++k) dot += ref[k] * c[k];
      map.at(dx, dy) = dot;
    }
  }
  return map;
}

SimilarityMap resample(const SimilarityMap& map, int target_stride, int target_radius) {
  if (map.stride() == target_stride && map.radius() == target_radius) return map;
  SimilarityMap out(target_radius, target_stride);
  const double ratio = static_cast<double>(target_stride) / map.stride();
  // Source displacements within half a target cell of the centre, clipped to the source window.
  const int half = static_cast<int>(std::floor(ratio / 2.0));
  const int r = map.radius();
  for (int dy = -target_radius; dy <= target_radius; ++dy) {
    for (int dx = -target_radius; dx <= target_radius; ++dx) {
      const int sx = static_cast<int>(std::lround(dx * ratio));
      const int sy = static_cast<int>(std::lround(dy * ratio));
      if (std::abs(sx) > r || std::abs(sy) > r) {
        throw ShapeError("similarity map of radius " + std::to_string(r) + " at stride " +
                         std::to_string(map.stride()) + " does not cover radius " + std::to_string(target_radius) +
                         " at stride " + std::to_string(target_stride));
      }
      double best = map.at(sx, sy);
      for (int y = std::max(-r, sy - half); y <= std::min(r, sy + half); ++y) {
        for (int x = std::max(-r, sx - half); x <= std::min(r, sx + half); ++x) best = std::max(best, map.at(x, y));
      }
      out.at(dx, dy) = best;
    }
  }
  return out;
}

SimilarityMap fuse_similarity(const SimilarityMap& deep, const SimilarityMap& mid, const SimilarityMap& shallow) {
  const SimilarityMap m = resample(mid, deep.stride(), deep.radius());
  const SimilarityMap s = resample(shallow, deep.stride(), deep.radius());
  SimilarityMap fused(deep.radius(), deep.stride());
  for (int dy = -deep.radius(); dy <= deep.radius(); ++dy) {
    for (int dx = -deep.radius(); dx <= deep.radius(); ++dx) {
      fused.at(dx, dy) = deep.at(dx, dy) + m.at(dx, dy) + s.at(dx, dy);
    }
  }
  return fused;
}

Displacement argmax_displacement(const SimilarityMap& map) {
  if (map.empty()) throw ShapeError("argmax of an empty similarity map");
  Displacement best{0, 0};
  double best_value = map.at(0, 0);
  const auto key = [](int dx, int dy) { return std::tuple(dx * dx + dy * dy, dy, dx); };
  for (int dy = -map.radius(); dy <= map.radius(); ++dy) {
    for (int dx = -map.radius(); dx <= map.radius(); ++dx) {
      const double v = map.at(dx, dy);
      if (v > best_value || (v == best_value && key(dx, dy) < key(best.dx, best.dy))) {
        best = {dx, dy};
        best_value = v;
      }
    }
  }
  return best;
}

Point2 predict_offset(const SimilarityMap& fused) {
  const Displacement d = argmax_displacement(fused);
  return {static_cast<double>(d.dx * fused.stride()), static_cast<double>(d.dy * fused.stride())};
}

double SimilarityVolume::at_pixel(Point2 p) const {
  const int cx = static_cast<int>(std::floor(p.x / fused.stride()));
  const int cy = static_cast<int>(std::floor(p.y / fused.stride()));
  const int dx = cx - anchor.x;
  const int dy = cy - anchor.y;
  if (std::abs(dx) > radius || std::abs(dy) > radius) return -static_cast<double>(scales);
  return fused.at(dx, dy);
}

SimilarityVolume compute_volume(const FeaturePyramid& prev, const FeaturePyramid& cur, Point2 center,
                                const FusionConfig& config) {
  const FeatureGrid& deep_prev = prev.level(Scale::Deep);
  SimilarityVolume vol;
  vol.radius = config.radius;
  vol.anchor = cell_of(deep_prev, center);
  vol.deep = scale_similarity(deep_prev, cur.level(Scale::Deep), vol.anchor, config.radius);
  if (!config.multi_scale) {
    vol.fused = vol.deep;
    vol.scales = 1;
    return vol;
  }
  // Finer scales search the same pixel window: radius scales with 8 / stride.
  auto finer = [&](Scale s) {
    const FeatureGrid& g = prev.level(s);
    const int radius = config.radius * features::kDeepStride / g.stride();
    return scale_similarity(g, cur.level(s), cell_of(g, center), radius);
  };
  vol.mid = finer(Scale::Mid);
  vol.shallow = finer(Scale::Shallow);
  vol.fused = fuse_similarity(vol.deep, vol.mid, vol.shallow);
  vol.scales = 3;
  return vol;
}

void write_map_text(std::ostream& out, const SimilarityMap& map) {
  out << "# radius " << map.radius() << " stride " << map.stride() << "\n";
  out << std::fixed << std::setprecision(4);
  for (int dy = -map.radius(); dy <= map.radius(); ++dy) {
    for (int dx = -map.radius(); dx <= map.radius(); ++dx) {
      out << (dx > -map.radius() ? " " : "") << map.at(dx, dy);
    }
    out << "\n";
  }
}

}  // namespace mpt::similarity
