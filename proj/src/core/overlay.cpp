#include "mpt/core/overlay.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "mpt/core/random.hpp"

namespace mpt {

namespace {

// 3x5 glyphs, one row per entry, bit 2 is the leftmost column.
constexpr std::array<std::array<std::uint8_t, 5>, 10> kDigits = {{
    {7, 5, 5, 5, 7}, {2, 6, 2, 2, 7}, {7, 1, 7, 4, 7}, {7, 1, 7, 1, 7}, {5, 5, 7, 1, 1},
    {7, 4, 7, 1, 7}, {7, 4, 7, 5, 7}, {7, 1, 1, 1, 1}, {7, 5, 7, 5, 7}, {7, 5, 7, 1, 7},
}};

void put(Frame& f, int x, int y, Rgb c) {
  if (x >= 0 && y >= 0 && x < f.width() && y < f.height()) f.set(x, y, c);
}

}  // namespace

Rgb id_color(int id) {
  // Golden-ratio hue steps keep neighbouring ids apart; saturation and value are fixed.
  const double h = std::fmod(static_cast<double>(splitmix64(static_cast<std::uint64_t>(id)) % 1000) / 1000.0 +
                                 0.618033988749895 * id,
                             1.0);
  const double s = 0.85, v = 0.95;
  const int i = static_cast<int>(h * 6.0) % 6;
  const double fr = h * 6.0 - std::floor(h * 6.0);
  const double p = v * (1 - s), q = v * (1 - fr * s), t = v * (1 - (1 - fr) * s);
  double r = v, g = t, b = p;
  switch (i) {
    case 0: r = v; g = t; b = p; break;
    case 1: r = q; g = v; b = p; break;
    case 2: r = p; g = v; b = t; break;
    case 3: r = p; g = q; b = v; break;
    case 4: r = t; g = p; b = v; break;
    default: r = v; g = p; b = q; break;
  }
  const auto u8 = [](double x) { return static_cast<std::uint8_t>(std::lround(std::clamp(x, 0.0, 1.0) * 255.0)); };
  return {u8(r), u8(g), u8(b)};
}

void draw_overlay(Frame& frame, std::span<const GtRecord> records) {
  for (const GtRecord& r : records) {
    const Rgb c = id_color(r.id);
    const int x0 = static_cast<int>(round_half_up(r.box.x()));
    const int y0 = static_cast<int>(round_half_up(r.box.y()));
    const int x1 = static_cast<int>(round_half_up(r.box.right())) - 1;
    const int y1 = static_cast<int>(round_half_up(r.box.bottom())) - 1;
    for (int t = 0; t < 2; ++t) {
      for (int x = x0; x <= x1; ++x) {
        put(frame, x, y0 + t, c);
        put(frame, x, y1 - t, c);
      }
      for (int y = y0; y <= y1; ++y) {
        put(frame, x0 + t, y, c);
        put(frame, x1 - t, y, c);
      }
    }
    const std::string label = std::to_string(r.id);
    const int ty = y0 - 7 >= 0 ? y0 - 7 : y0 + 3;
    for (std::size_t k = 0; k < label.size(); ++k) {
      const auto& glyph = kDigits[static_cast<std::size_t>(label[k] - '0')];
      const int tx = x0 + static_cast<int>(k) * 4;
      for (int gy = 0; gy < 5; ++gy) {
        for (int gx = 0; gx < 3; ++gx) {
          if (glyph[static_cast<std::size_t>(gy)] & (4 >> gx)) put(frame, tx + gx, ty + gy, c);
        }
      }
    }
  }
}

}  // namespace mpt
