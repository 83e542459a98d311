#include <algorithm>
#include <cmath>
#include <numbers>
#include <regex>

#include "mpt/core/error.hpp"
#include "mpt/core/species.hpp"
#include "mpt/synthgen/synthgen.hpp"

namespace mpt::synth {
namespace {

enum class Silhouette { Ellipse, Chain, SpikedDisc };

std::uint8_t to_byte(double v) { return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L)); }

struct Palette {
  double r, g, b;
};

// Inside test and shading for one silhouette, in sprite-centred coordinates.
// Returns a shade factor in (0, 1] for inside points, or 0 outside.
struct ShapeParams {
  Silhouette kind;
  double radius;     // half nominal diameter
  double aspect;     // ellipse: major / minor
  int segments;      // chain cells or spikes
  double core;       // spiked disc core radius
  double tilt;       // spike phase
};

double shade_at(const ShapeParams& p, double x, double y) {
  switch (p.kind) {
    case Silhouette::Ellipse: {
      const double a = p.radius;
      const double b = p.radius / p.aspect;
      const double q = (x * x) / (a * a) + (y * y) / (b * b);
      if (q > 1.0) return 0.0;
      // Dark rim, lighter interior with faint banding along the major axis.
      const double band = 0.06 * std::cos(6.0 * std::numbers::pi * x / a);
      return 0.7 + 0.3 * (1.0 - q) + band;
    }
    case Silhouette::Chain: {
      const double cell = 2.0 * p.radius / p.segments;
      const double r = 0.5 * cell * 1.08;  // overlap keeps the chain 8-connected
      const double local = std::fmod(x + p.radius + 10 * cell, cell) - 0.5 * cell;
      if (std::abs(x) > p.radius) return 0.0;
      const double q = (local * local + y * y) / (r * r);
      if (q > 1.0) return 0.0;
      return 0.72 + 0.28 * (1.0 - q);
    }
    case Silhouette::SpikedDisc: {
      const double d = std::hypot(x, y);
      if (d <= p.core) {
        const double q = d / p.core;
        return 0.68 + 0.3 * (1.0 - q * q);
      }
      if (d > p.radius) return 0.0;
      const double theta = std::atan2(y, x) + p.tilt;
      const double phase = std::fmod(theta * p.segments / (2.0 * std::numbers::pi) + 100.0, 1.0);
      const double width = 0.18 * (1.0 - (d - p.core) / (p.radius - p.core)) + 0.04;
      return std::abs(phase - 0.5) < width ? 0.8 : 0.0;
    }
  }
  return 0.0;
}

}  // namespace

double SpriteAsset::extent_radius() const {
  return 0.5 * std::hypot(static_cast<double>(raster.width()), static_cast<double>(raster.height()));
}

double procedural_diameter(int species) {
  if (species < 1 || species > kSpeciesCount) throw ValidationError("species must be in [1,27]");
  // Size rank is a fixed permutation of the species index so size does not follow list order.
  const int rank = ((species - 1) * 7) % kSpeciesCount;
  return 8.0 * std::pow(120.0 / 8.0, rank / static_cast<double>(kSpeciesCount - 1));
}

SpriteAsset make_procedural_sprite(int species) {
  const double diameter = procedural_diameter(species);
  Rng rng(derive_seed(0x5eedULL, static_cast<std::uint64_t>(species)));

  ShapeParams params{};
  params.kind = static_cast<Silhouette>(species % 3);
  params.radius = 0.5 * diameter;
  params.aspect = uniform(rng, 1.0, 2.2);
  params.segments = params.kind == Silhouette::Chain ? uniform_int(rng, 2, 5) : uniform_int(rng, 5, 9);
  params.core = params.radius * uniform(rng, 0.45, 0.6);
  params.tilt = uniform(rng, 0.0, 2.0 * std::numbers::pi);
  if (params.kind == Silhouette::Chain) params.aspect = 1.0;

  // Greenish-brown cells; the blue channel stays low so the sprite contrasts with
  // both background families.
  const Palette color{uniform(rng, 90, 140), uniform(rng, 100, 150), uniform(rng, 30, 70)};

  const double half_h = params.kind == Silhouette::Chain ? params.radius / params.segments * 1.08 : params.radius;
  const int w = static_cast<int>(std::ceil(diameter)) + 2;
  const int h = static_cast<int>(std::ceil(2.0 * half_h)) + 2;
  SpriteAsset asset;
  asset.species = species;
  asset.nominal_diameter = diameter;
  asset.raster = RgbaImage(w, h);
  const double cx = 0.5 * (w - 1);
  const double cy = 0.5 * (h - 1);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double shade = shade_at(params, x - cx, y - cy);
      if (shade <= 0.0) continue;
      std::uint8_t* px = asset.raster.pixel(x, y);
      px[0] = to_byte(color.r * shade);
      px[1] = to_byte(color.g * shade);
      px[2] = to_byte(color.b * shade);
      px[3] = 255;
    }
  }
  // Guarantee at least the centre pixel is opaque for the tiniest silhouettes.
  std::uint8_t* centre = asset.raster.pixel(w / 2, h / 2);
  if (centre[3] == 0) {
    centre[0] = to_byte(color.r * 0.8);
    centre[1] = to_byte(color.g * 0.8);
    centre[2] = to_byte(color.b * 0.8);
    centre[3] = 255;
  }
  return asset;
}

SpriteLibrary procedural_sprite_library() {
  SpriteLibrary lib;
  for (int s = 1; s <= kSpeciesCount; ++s) lib.push_back(std::make_shared<const SpriteAsset>(make_procedural_sprite(s)));
  return lib;
}

SpriteLibrary load_sprite_directory(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw IoError("sprite directory does not exist", dir.string());
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".png") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  static const std::regex pattern(R"(^(\d+)_.*\.png$)");
  SpriteLibrary lib;
  for (const auto& f : files) {
    std::smatch m;
    const std::string name = f.filename().string();
    if (!std::regex_match(name, m, pattern)) throw ValidationError("sprite file must be named <species>_*.png: " + name);
    const int species = std::stoi(m[1].str());
    if (species < 1 || species > kSpeciesCount) throw ValidationError("sprite species out of range: " + name);
    SpriteAsset asset;
    asset.species = species;
    asset.raster = read_png_rgba(f);
    int opaque = 0;
    int x0 = asset.raster.width(), x1 = -1, y0 = asset.raster.height(), y1 = -1;
    for (int y = 0; y < asset.raster.height(); ++y) {
      for (int x = 0; x < asset.raster.width(); ++x) {
        if (asset.raster.alpha(x, y) < kOpaqueAlpha) continue;
        ++opaque;
        x0 = std::min(x0, x);
        x1 = std::max(x1, x);
        y0 = std::min(y0, y);
        y1 = std::max(y1, y);
      }
    }
    if (opaque == 0) throw ValidationError("sprite has no opaque pixel: " + f.string());
    asset.nominal_diameter = std::max(x1 - x0 + 1, y1 - y0 + 1);
    lib.push_back(std::make_shared<const SpriteAsset>(std::move(asset)));
  }
  if (lib.empty()) throw ValidationError("sprite directory contains no sprites: " + dir.string());
  return lib;
}

}  // namespace mpt::synth
