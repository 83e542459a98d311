#include <algorithm>
#include <cmath>
#include <limits>

#include "mpt/core/error.hpp"
#include "mpt/synthgen/synthgen.hpp"

namespace mpt::synth {

PlacedSprite place_sprite(const SpriteAsset& sprite, Point2 position, double angle) {
  const RgbaImage& src = sprite.raster;
  const double ext = sprite.extent_radius();
  const int x0 = static_cast<int>(std::floor(position.x - ext)) - 1;
  const int y0 = static_cast<int>(std::floor(position.y - ext)) - 1;
  const int x1 = static_cast<int>(std::ceil(position.x + ext)) + 1;
  const int y1 = static_cast<int>(std::ceil(position.y + ext)) + 1;

  PlacedSprite out;
  out.origin_x = x0;
  out.origin_y = y0;
  out.patch = RgbaImage(x1 - x0 + 1, y1 - y0 + 1);
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const double scx = 0.5 * (src.width() - 1);
  const double scy = 0.5 * (src.height() - 1);
  // Inverse mapping with nearest-neighbour sampling keeps binary alpha binary.
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      const double dx = x - position.x;
      const double dy = y - position.y;
      const double sx = scx + c * dx + s * dy;
      const double sy = scy - s * dx + c * dy;
      const long ix = static_cast<long>(std::floor(sx + 0.5));
      const long iy = static_cast<long>(std::floor(sy + 0.5));
      if (ix < 0 || iy < 0 || ix >= src.width() || iy >= src.height()) continue;
      const std::uint8_t* p = src.pixel(static_cast<int>(ix), static_cast<int>(iy));
      std::copy(p, p + 4, out.patch.pixel(x - x0, y - y0));
    }
  }
  return out;
}

CompositeResult composite_frame(const Frame& background, std::span<const Actor> actors, int frame_index) {
  CompositeResult result;
  result.frame = background;
  result.frame.set_index(frame_index);
  const int W = background.width();
  const int H = background.height();
  if (actors.empty()) return result;
  if (actors.size() > static_cast<std::size_t>(std::numeric_limits<std::int32_t>::max())) {
    throw GenerationError("too many actors");
  }

  struct Footprint {
    long opaque_total = 0;
    int x0 = std::numeric_limits<int>::max(), y0 = std::numeric_limits<int>::max();
    int x1 = std::numeric_limits<int>::min(), y1 = std::numeric_limits<int>::min();
  };
  std::vector<Footprint> fp(actors.size());
  // Front-most actor per pixel, -1 for none.
  std::vector<std::int32_t> owner(static_cast<std::size_t>(W) * H, -1);

  for (std::size_t i = 0; i < actors.size(); ++i) {
    const Actor& actor = actors[i];
    const PlacedSprite placed = place_sprite(*actor.sprite, actor.state.position, actor.state.angle);
    for (int py = 0; py < placed.patch.height(); ++py) {
      const int y = placed.origin_y + py;
      for (int px = 0; px < placed.patch.width(); ++px) {
        const std::uint8_t* s = placed.patch.pixel(px, py);
        if (s[3] == 0) continue;
        const int x = placed.origin_x + px;
        const bool inside = x >= 0 && y >= 0 && x < W && y < H;
        if (s[3] >= kOpaqueAlpha) {
          ++fp[i].opaque_total;
          if (inside) {
            fp[i].x0 = std::min(fp[i].x0, x);
            fp[i].x1 = std::max(fp[i].x1, x);
            fp[i].y0 = std::min(fp[i].y0, y);
            fp[i].y1 = std::max(fp[i].y1, y);
            owner[static_cast<std::size_t>(y) * W + x] = static_cast<std::int32_t>(i);
          }
        }
        if (!inside) continue;
        std::uint8_t* d = result.frame.pixel(x, y);
        if (s[3] == 255) {
          d[0] = s[0];
          d[1] = s[1];
          d[2] = s[2];
        } else {
          const int a = s[3];
          for (int ch = 0; ch < 3; ++ch) d[ch] = static_cast<std::uint8_t>((s[ch] * a + d[ch] * (255 - a) + 127) / 255);
        }
      }
    }
  }

  std::vector<long> visible(actors.size(), 0);
  for (const std::int32_t o : owner) {
    if (o >= 0) ++visible[static_cast<std::size_t>(o)];
  }
  for (std::size_t i = 0; i < actors.size(); ++i) {
    if (visible[i] == 0 || fp[i].opaque_total == 0) continue;
    GtRecord rec;
    rec.frame = frame_index;
    rec.id = static_cast<int>(i) + 1;
    rec.box = BoundingBox(fp[i].x0, fp[i].y0, fp[i].x1 - fp[i].x0 + 1, fp[i].y1 - fp[i].y0 + 1);
    rec.conf = 1.0;
    rec.class_id = actors[i].sprite->species;
    rec.visibility = static_cast<double>(visible[i]) / static_cast<double>(fp[i].opaque_total);
    result.records.push_back(rec);
  }
  return result;
}

}  // namespace mpt::synth
