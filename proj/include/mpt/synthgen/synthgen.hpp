#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "mpt/core/geometry.hpp"
#include "mpt/core/image.hpp"
#include "mpt/core/random.hpp"
#include "mpt/core/records.hpp"

namespace mpt::synth {

// ---------------------------------------------------------------------------
// Backgrounds

enum class BackgroundFamily { Blue, White };

struct BackgroundSpec {
  int id = 1;  ///< 1..7 blue, 8..14 white for the presets
  BackgroundFamily family = BackgroundFamily::Blue;
  double impurity_density = 0.0;  ///< expected impurities per megapixel
  double brightness = 1.0;        ///< multiplicative gain on the base colour, (0, 2]
  double impurity_size_min = 1.5;  ///< impurity radius range in pixels
  double impurity_size_max = 4.0;
};

/// The 14 shipped presets, index i holds id i + 1.
const std::array<BackgroundSpec, 14>& background_presets();
const BackgroundSpec& background_preset(int id);

Rgb family_base_color(BackgroundFamily family);

struct Impurity {
  Point2 center;
  double radius = 1.0;
  double elongation = 1.0;  ///< major / minor axis ratio
  double angle = 0.0;
  Rgb color;
  double opacity = 0.5;
};

/// Poisson(density * area_in_megapixels) impurities placed uniformly.
std::vector<Impurity> sample_impurities(const BackgroundSpec& spec, int width, int height, Rng& rng);

/// Base colour scaled by brightness, with sampled impurities blended on top.
/// `impurity_count`, when given, receives the number of impurities drawn.
Frame render_background(const BackgroundSpec& spec, int width, int height, Rng& rng,
                        std::size_t* impurity_count = nullptr);

// ---------------------------------------------------------------------------
// Sprites

struct SpriteAsset {
  int species = 1;  ///< 1..27
  RgbaImage raster;
  double nominal_diameter = 8.0;

  /// Half diagonal of the raster: no rotation of the sprite reaches further from its centre.
  double extent_radius() const;
};

using SpriteLibrary = std::vector<std::shared_ptr<const SpriteAsset>>;

/// Nominal diameter of the procedural sprite for a species, spread log-uniformly over [8, 120].
double procedural_diameter(int species);
/// Deterministic silhouette for `species`: ellipse, chain or spiked disc.
SpriteAsset make_procedural_sprite(int species);
SpriteLibrary procedural_sprite_library();
/// Loads `<dir>/<species>_*.png` RGBA crops. Throws when a file name does not
/// start with a species number in [1,27] or the crop has no opaque pixel.
SpriteLibrary load_sprite_directory(const std::filesystem::path& dir);

// ---------------------------------------------------------------------------
// Motion

struct MotionState {
  Point2 position;  ///< sprite centre, pixels
  Point2 velocity;  ///< pixels / frame
  double angle = 0.0;
  double angular_velocity = 0.0;  ///< radians / frame
  double jitter_amplitude = 0.0;  ///< pixels, uniform per axis
};

/// Region the sprite centre may occupy: [radius, width - 1 - radius] x [radius, height - 1 - radius].
struct MotionBounds {
  int width = 0;
  int height = 0;
  double radius = 0.0;
};

/// One frame of motion: drift by velocity, add per-axis uniform jitter, rotate, and
/// mirror the position (and the velocity component) at the bounds.
MotionState step_motion(const MotionState& state, const MotionBounds& bounds, Rng& rng);

// ---------------------------------------------------------------------------
// Scenario

struct RealRange {
  double min = 0.0;
  double max = 0.0;
};
struct IntRange {
  int min = 0;
  int max = 0;
};

struct ScenarioConfig {
  std::uint64_t master_seed = 20240917;
  int sequences_per_background = 10;
  IntRange frame_count_range{100, 300};
  IntRange sprite_count_range{5, 20};
  RealRange speed_range{0.5, 4.0};
  RealRange jitter_range{0.0, 2.0};
  RealRange rotation_rate_range{-0.05, 0.05};
  int width = 640;
  int height = 480;
  int fps = 25;
  std::string sprite_dir;  ///< empty: procedural library

  /// Throws ValidationError listing the first violated constraint.
  void validate() const;
  std::string to_json() const;
  static ScenarioConfig from_json(const std::string& text);
};

struct Actor {
  std::shared_ptr<const SpriteAsset> sprite;
  MotionState state;
};

/// Draws sprite count, species and motion parameters uniformly from the
/// configured ranges and places sprites fully inside the frame. Throws
/// GenerationError when a sprite cannot be placed with at most 90% overlap.
std::vector<Actor> sample_scenario(const ScenarioConfig& config, int background_id, const SpriteLibrary& library,
                                   Rng& rng);

/// A sprite resampled at a pose: RGBA patch whose top-left pixel lands at `origin`.
struct PlacedSprite {
  int origin_x = 0;
  int origin_y = 0;
  RgbaImage patch;
};
PlacedSprite place_sprite(const SpriteAsset& sprite, Point2 position, double angle);

struct CompositeResult {
  Frame frame;
  /// id = actor index + 1; actors with no visible pixel are omitted.
  std::vector<GtRecord> records;
};

/// Draws actors back to front (actor 0 first). Boxes bound the whole rotated
/// opaque region clipped to the frame; visibility is the fraction of that region
/// not covered by actors drawn later.
CompositeResult composite_frame(const Frame& background, std::span<const Actor> actors, int frame_index = 1);

// ---------------------------------------------------------------------------
// Sequences and benchmarks

struct SequenceTrace {
  std::vector<int> actor_ids;                        ///< final id per actor, 0 if never visible
  std::vector<std::vector<MotionState>> states;      ///< states[frame - 1][actor]
  std::vector<std::shared_ptr<const SpriteAsset>> sprites;
};

struct GeneratedSequence {
  std::vector<Frame> frames;
  std::vector<GtRecord> gt;
  SequenceMeta meta;
  Frame background;
  SequenceTrace trace;
};

using FrameSink = std::function<void(const Frame&)>;

/// Streams frames to `sink` and returns everything except the frames.
GeneratedSequence generate_sequence_streamed(const ScenarioConfig& config, const BackgroundSpec& background,
                                             std::uint64_t sequence_seed, const SpriteLibrary& library,
                                             const FrameSink& sink);
GeneratedSequence generate_sequence(const ScenarioConfig& config, const BackgroundSpec& background,
                                    std::uint64_t sequence_seed, const SpriteLibrary& library);

struct ManifestEntry {
  std::string split;
  std::string name;
  int background_id = 1;
  int seq_idx = 1;
  std::uint64_t seed = 0;
  int length = 0;
  std::string gt_checksum;
};

struct BenchmarkManifest {
  std::vector<ManifestEntry> entries;
  std::string to_csv() const;
  /// Digest of the CSV text.
  std::string checksum() const;
};

std::uint64_t sequence_seed(std::uint64_t master_seed, int background_id, int seq_idx, int sequences_per_background);

/// Writes `<root>/<split>/<name>/{img1/%06d.png, gt/gt.txt, seqinfo.ini}` for all
/// 14 x sequences_per_background sequences, plus `manifest.csv` and `config.json`.
/// Output bytes do not depend on `jobs`.
BenchmarkManifest generate_benchmark(const ScenarioConfig& config, const std::filesystem::path& root, int jobs = 1);

}  // namespace mpt::synth
