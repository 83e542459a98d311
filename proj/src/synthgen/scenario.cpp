#include <algorithm>
#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>

#include "mpt/core/error.hpp"
#include "mpt/synthgen/synthgen.hpp"

namespace mpt::synth {

using nlohmann::json;

MotionState step_motion(const MotionState& state, const MotionBounds& bounds, Rng& rng) {
  MotionState next = state;
  const double j = state.jitter_amplitude;
  const double jx = j > 0.0 ? uniform(rng, -j, j) : 0.0;
  const double jy = j > 0.0 ? uniform(rng, -j, j) : 0.0;
  next.position.x += state.velocity.x + jx;
  next.position.y += state.velocity.y + jy;
  next.angle = std::remainder(state.angle + state.angular_velocity, 2.0 * std::numbers::pi);

  const double lo = bounds.radius;
  auto reflect = [lo](double& p, double& v, double hi) {
    if (hi < lo) {
      p = 0.5 * (lo + hi);
      return;
    }
    if (p < lo) {
      p = 2.0 * lo - p;
      v = std::abs(v);
    } else if (p > hi) {
      p = 2.0 * hi - p;
      v = -std::abs(v);
    }
    p = std::clamp(p, lo, hi);
  };
  reflect(next.position.x, next.velocity.x, bounds.width - 1.0 - bounds.radius);
  reflect(next.position.y, next.velocity.y, bounds.height - 1.0 - bounds.radius);
  return next;
}

void ScenarioConfig::validate() const {
  auto fail = [](const std::string& what) { throw ValidationError("scenario config: " + what); };
  if (sequences_per_background < 1) fail("sequences_per_background must be >= 1");
  if (frame_count_range.min < 1 || frame_count_range.min > frame_count_range.max) {
    fail("frame_count_range must satisfy 1 <= min <= max");
  }
  if (sprite_count_range.min < 0 || sprite_count_range.min > sprite_count_range.max) {
    fail("sprite_count_range must satisfy 0 <= min <= max");
  }
  if (speed_range.min < 0.0 || speed_range.min > speed_range.max) fail("speed_range must satisfy 0 <= min <= max");
  if (jitter_range.min < 0.0 || jitter_range.min > jitter_range.max) fail("jitter_range must satisfy 0 <= min <= max");
  if (rotation_rate_range.min > rotation_rate_range.max) fail("rotation_rate_range must satisfy min <= max");
  if (width < 16 || height < 16) fail("frame_size must be at least 16x16");
  if (fps != 25) fail("fps must be 25");
}

namespace {

template <typename R>
json range_json(const R& r) {
  return json::array({r.min, r.max});
}

template <typename R>
void read_range(const json& j, const char* key, R& out) {
  if (!j.contains(key)) return;
  const json& v = j.at(key);
  if (!v.is_array() || v.size() != 2) throw ValidationError(std::string("scenario config: ") + key + " must be [min, max]");
  v.at(0).get_to(out.min);
  v.at(1).get_to(out.max);
}

}  // namespace

std::string ScenarioConfig::to_json() const {
  json j;
  j["master_seed"] = master_seed;
  j["sequences_per_background"] = sequences_per_background;
  j["frame_count_range"] = range_json(frame_count_range);
  j["sprite_count_range"] = range_json(sprite_count_range);
  j["speed_range"] = range_json(speed_range);
  j["jitter_range"] = range_json(jitter_range);
  j["rotation_rate_range"] = range_json(rotation_rate_range);
  j["frame_size"] = json::array({width, height});
  j["fps"] = fps;
  j["sprite_dir"] = sprite_dir;
  return j.dump(2) + "\n";
}

ScenarioConfig ScenarioConfig::from_json(const std::string& text) {
  ScenarioConfig c;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("scenario config is not valid JSON: ") + e.what(), 0);
  }
  if (!j.is_object()) throw ValidationError("scenario config must be a JSON object");
  static const std::vector<std::string> known = {"master_seed",     "sequences_per_background", "frame_count_range",
                                                 "sprite_count_range", "speed_range",          "jitter_range",
                                                 "rotation_rate_range", "frame_size",          "fps",
                                                 "sprite_dir",      "$schema"};
  for (const auto& [key, _] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ValidationError("scenario config: unknown key '" + key + "'");
    }
  }
  try {
    if (j.contains("master_seed")) j.at("master_seed").get_to(c.master_seed);
    if (j.contains("sequences_per_background")) j.at("sequences_per_background").get_to(c.sequences_per_background);
    read_range(j, "frame_count_range", c.frame_count_range);
    read_range(j, "sprite_count_range", c.sprite_count_range);
    read_range(j, "speed_range", c.speed_range);
    read_range(j, "jitter_range", c.jitter_range);
    read_range(j, "rotation_rate_range", c.rotation_rate_range);
    if (j.contains("frame_size")) {
      const json& fs = j.at("frame_size");
      if (!fs.is_array() || fs.size() != 2) throw ValidationError("scenario config: frame_size must be [width, height]");
      fs.at(0).get_to(c.width);
      fs.at(1).get_to(c.height);
    }
    if (j.contains("fps")) j.at("fps").get_to(c.fps);
    if (j.contains("sprite_dir")) j.at("sprite_dir").get_to(c.sprite_dir);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("scenario config: ") + e.what());
  }
  c.validate();
  return c;
}

namespace {

double overlap_fraction(const BoundingBox& a, const BoundingBox& b) {
  return intersection_area(a, b) / std::min(a.area(), b.area());
}

}  // namespace

std::vector<Actor> sample_scenario(const ScenarioConfig& config, int background_id, const SpriteLibrary& library,
                                   Rng& rng) {
  (void)background_id;  // every background shares one sprite library
  if (library.empty()) throw GenerationError("sprite library is empty");
  config.validate();

  const int count = uniform_int(rng, config.sprite_count_range.min, config.sprite_count_range.max);
  std::vector<Actor> actors;
  std::vector<BoundingBox> placed;
  actors.reserve(static_cast<std::size_t>(count));
  constexpr int kAttempts = 200;
  for (int i = 0; i < count; ++i) {
    Actor actor;
    actor.sprite = library[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(library.size()) - 1))];
    const double r = actor.sprite->extent_radius();
    const double hi_x = config.width - 1.0 - r;
    const double hi_y = config.height - 1.0 - r;
    if (hi_x < r || hi_y < r) {
      throw GenerationError("frame " + std::to_string(config.width) + "x" + std::to_string(config.height) +
                            " is too small for a sprite of extent radius " + std::to_string(r));
    }
    const double speed = uniform(rng, config.speed_range.min, config.speed_range.max);
    const double heading = uniform(rng, 0.0, 2.0 * std::numbers::pi);
    actor.state.velocity = {speed * std::cos(heading), speed * std::sin(heading)};
    actor.state.jitter_amplitude = uniform(rng, config.jitter_range.min, config.jitter_range.max);
    actor.state.angular_velocity = uniform(rng, config.rotation_rate_range.min, config.rotation_rate_range.max);
    actor.state.angle = uniform(rng, -std::numbers::pi, std::numbers::pi);

    bool ok = false;
    for (int attempt = 0; attempt < kAttempts && !ok; ++attempt) {
      const Point2 p{uniform(rng, r, hi_x), uniform(rng, r, hi_y)};
      const BoundingBox box = BoundingBox::from_center(p.x, p.y, 2.0 * r, 2.0 * r);
      ok = std::all_of(placed.begin(), placed.end(),
                       [&](const BoundingBox& other) { return overlap_fraction(box, other) <= 0.9; });
      if (ok) {
        actor.state.position = p;
        placed.push_back(box);
      }
    }
    if (!ok) {
      throw GenerationError("cannot place " + std::to_string(count) + " sprites in a " + std::to_string(config.width) +
                            "x" + std::to_string(config.height) + " frame without initial overlap above 90%");
    }
    actors.push_back(std::move(actor));
  }
  return actors;
}

}  // namespace mpt::synth
