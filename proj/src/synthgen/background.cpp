#include <algorithm>
#include <cmath>
#include <numbers>

#include "mpt/core/error.hpp"
#include "mpt/synthgen/synthgen.hpp"

namespace mpt::synth {
namespace {

std::array<BackgroundSpec, 14> make_presets() {
  // Level k = 1..7 within each family: density rises with k, brightness alternates
  // around 1 so that density and illumination are not confounded.
  constexpr std::array<double, 7> density = {20, 60, 120, 200, 320, 480, 700};
  constexpr std::array<double, 7> brightness = {1.00, 0.90, 1.10, 0.85, 1.05, 0.95, 1.15};
  std::array<BackgroundSpec, 14> out{};
  for (int i = 0; i < 14; ++i) {
    const int k = i % 7;
    BackgroundSpec& s = out[static_cast<std::size_t>(i)];
    s.id = i + 1;
    s.family = i < 7 ? BackgroundFamily::Blue : BackgroundFamily::White;
    s.impurity_density = density[static_cast<std::size_t>(k)];
    s.brightness = brightness[static_cast<std::size_t>(k)];
    s.impurity_size_min = 1.5;
    s.impurity_size_max = 3.0 + 0.8 * (k + 1);
  }
  return out;
}

std::uint8_t to_byte(double v) { return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L)); }

}  // namespace

const std::array<BackgroundSpec, 14>& background_presets() {
  static const std::array<BackgroundSpec, 14> presets = make_presets();
  return presets;
}

const BackgroundSpec& background_preset(int id) {
  if (id < 1 || id > 14) throw ValidationError("background preset id must be in [1,14]");
  return background_presets()[static_cast<std::size_t>(id - 1)];
}

Rgb family_base_color(BackgroundFamily family) {
  return family == BackgroundFamily::Blue ? Rgb{60, 110, 185} : Rgb{228, 230, 226};
}

std::vector<Impurity> sample_impurities(const BackgroundSpec& spec, int width, int height, Rng& rng) {
  if (spec.impurity_density < 0.0) throw ValidationError("impurity density must be >= 0");
  if (spec.impurity_size_min <= 0.0 || spec.impurity_size_max < spec.impurity_size_min) {
    throw ValidationError("impurity size range must satisfy 0 < min <= max");
  }
  const double mean = spec.impurity_density * static_cast<double>(width) * height / 1.0e6;
  std::vector<Impurity> out;
  if (mean <= 0.0) return out;
  const auto count = std::poisson_distribution<long>(mean)(rng);
  out.reserve(static_cast<std::size_t>(count));
  for (long i = 0; i < count; ++i) {
    Impurity imp;
    imp.center = {uniform(rng, 0.0, width), uniform(rng, 0.0, height)};
    imp.radius = uniform(rng, spec.impurity_size_min, spec.impurity_size_max);
    imp.elongation = uniform(rng, 1.0, 2.5);
    imp.angle = uniform(rng, 0.0, std::numbers::pi);
    // Detritus palette: dull browns and greys, overlapping the sprite palette.
    const double tone = uniform(rng, 0.0, 1.0);
    imp.color = {to_byte(70 + 70 * tone), to_byte(65 + 70 * tone), to_byte(40 + 50 * tone)};
    imp.opacity = uniform(rng, 0.35, 0.85);
    out.push_back(imp);
  }
  return out;
}

Frame render_background(const BackgroundSpec& spec, int width, int height, Rng& rng, std::size_t* impurity_count) {
  if (!(spec.brightness > 0.0) || spec.brightness > 2.0) throw ValidationError("brightness must be in (0, 2]");
  const Rgb base = family_base_color(spec.family);
  const Rgb tinted{to_byte(base.r * spec.brightness), to_byte(base.g * spec.brightness),
                   to_byte(base.b * spec.brightness)};
  Frame frame(width, height, tinted);

  const std::vector<Impurity> impurities = sample_impurities(spec, width, height, rng);
  if (impurity_count) *impurity_count = impurities.size();
  for (const Impurity& imp : impurities) {
    const double major = imp.radius * std::sqrt(imp.elongation);
    const double minor = imp.radius / std::sqrt(imp.elongation);
    const double c = std::cos(imp.angle);
    const double s = std::sin(imp.angle);
    const int x0 = std::max(0, static_cast<int>(std::floor(imp.center.x - major)));
    const int x1 = std::min(width - 1, static_cast<int>(std::ceil(imp.center.x + major)));
    const int y0 = std::max(0, static_cast<int>(std::floor(imp.center.y - major)));
    const int y1 = std::min(height - 1, static_cast<int>(std::ceil(imp.center.y + major)));
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        const double dx = x - imp.center.x;
        const double dy = y - imp.center.y;
        const double u = (c * dx + s * dy) / major;
        const double v = (-s * dx + c * dy) / minor;
        if (u * u + v * v > 1.0) continue;
        std::uint8_t* p = frame.pixel(x, y);
        const double a = imp.opacity;
        p[0] = to_byte(a * imp.color.r + (1.0 - a) * p[0]);
        p[1] = to_byte(a * imp.color.g + (1.0 - a) * p[1]);
        p[2] = to_byte(a * imp.color.b + (1.0 - a) * p[2]);
      }
    }
  }
  return frame;
}

}  // namespace mpt::synth
