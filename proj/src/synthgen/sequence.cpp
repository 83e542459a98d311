#include <cstdio>
#include <sstream>

#include "mpt/core/dataset.hpp"
#include "mpt/core/error.hpp"
#include "mpt/core/mot_io.hpp"
#include "mpt/core/parallel.hpp"
#include "mpt/synthgen/synthgen.hpp"

namespace mpt::synth {

namespace {
enum Stream : std::uint64_t { kBackgroundStream = 0, kScenarioStream = 1, kMotionStream = 2 };
}

GeneratedSequence generate_sequence_streamed(const ScenarioConfig& config, const BackgroundSpec& background,
                                             std::uint64_t seed, const SpriteLibrary& library,
                                             const FrameSink& sink) {
  config.validate();
  GeneratedSequence out;

  Rng bg_rng(derive_seed(seed, kBackgroundStream));
  out.background = render_background(background, config.width, config.height, bg_rng);

  Rng scenario_rng(derive_seed(seed, kScenarioStream));
  const int length = uniform_int(scenario_rng, config.frame_count_range.min, config.frame_count_range.max);
  std::vector<Actor> actors = sample_scenario(config, background.id, library, scenario_rng);

  Rng motion_rng(derive_seed(seed, kMotionStream));
  std::vector<GtRecord> raw;
  out.trace.states.reserve(static_cast<std::size_t>(length));
  for (const Actor& a : actors) out.trace.sprites.push_back(a.sprite);
  for (int f = 1; f <= length; ++f) {
    if (f > 1) {
      for (Actor& a : actors) {
        a.state = step_motion(a.state, {config.width, config.height, a.sprite->extent_radius()}, motion_rng);
      }
    }
    std::vector<MotionState> states;
    states.reserve(actors.size());
    for (const Actor& a : actors) states.push_back(a.state);
    out.trace.states.push_back(std::move(states));

    CompositeResult composed = composite_frame(out.background, actors, f);
    raw.insert(raw.end(), composed.records.begin(), composed.records.end());
    if (sink) sink(composed.frame);
  }

  // Renumber ids to 1..K in actor order, skipping actors that never became visible.
  std::vector<int> seen(actors.size(), 0);
  for (const GtRecord& r : raw) seen[static_cast<std::size_t>(r.id - 1)] = 1;
  out.trace.actor_ids.assign(actors.size(), 0);
  int next = 1;
  for (std::size_t i = 0; i < actors.size(); ++i) {
    if (seen[i]) out.trace.actor_ids[i] = next++;
  }
  for (GtRecord& r : raw) r.id = out.trace.actor_ids[static_cast<std::size_t>(r.id - 1)];
  out.gt = std::move(raw);

  out.meta.fps = config.fps;
  out.meta.width = config.width;
  out.meta.height = config.height;
  out.meta.length = length;
  out.meta.background_id = background.id;
  out.meta.seed = seed;
  return out;
}

GeneratedSequence generate_sequence(const ScenarioConfig& config, const BackgroundSpec& background,
                                    std::uint64_t seed, const SpriteLibrary& library) {
  std::vector<Frame> frames;
  GeneratedSequence seq = generate_sequence_streamed(config, background, seed, library,
                                                     [&frames](const Frame& f) { frames.push_back(f); });
  seq.frames = std::move(frames);
  return seq;
}

std::uint64_t sequence_seed(std::uint64_t master_seed, int background_id, int seq_idx, int sequences_per_background) {
  const auto index = static_cast<std::uint64_t>(background_id - 1) * static_cast<std::uint64_t>(sequences_per_background) +
                     static_cast<std::uint64_t>(seq_idx - 1);
  return derive_seed(master_seed, index);
}

std::string BenchmarkManifest::to_csv() const {
  std::ostringstream out;
  out << "split,name,background,seq_idx,seed,length,gt_checksum\n";
  for (const auto& e : entries) {
    out << e.split << ',' << e.name << ',' << background_label(e.background_id) << ',' << e.seq_idx << ',' << e.seed
        << ',' << e.length << ',' << e.gt_checksum << '\n';
  }
  return out.str();
}

std::string BenchmarkManifest::checksum() const { return hex64(fnv1a64(to_csv())); }

BenchmarkManifest generate_benchmark(const ScenarioConfig& config, const std::filesystem::path& root, int jobs) {
  namespace fs = std::filesystem;
  config.validate();
  const SpriteLibrary library =
      config.sprite_dir.empty() ? procedural_sprite_library() : load_sprite_directory(config.sprite_dir);

  BenchmarkManifest manifest;
  for (int bg = 1; bg <= kBackgroundCount; ++bg) {
    for (int s = 1; s <= config.sequences_per_background; ++s) {
      ManifestEntry e;
      e.background_id = bg;
      e.seq_idx = s;
      e.split = split_for_index(s);
      e.name = sequence_name(bg, s);
      e.seed = sequence_seed(config.master_seed, bg, s, config.sequences_per_background);
      manifest.entries.push_back(e);
    }
  }

  std::error_code ec;
  fs::create_directories(root, ec);
  if (ec) throw IoError("cannot create dataset root: " + ec.message(), root.string());

  auto build_one = [&](ManifestEntry& e) {
    const fs::path dir = root / e.split / e.name;
    std::error_code err;
    fs::remove_all(dir, err);
    fs::create_directories(dir / "img1", err);
    if (!err) fs::create_directories(dir / "gt", err);
    if (err) throw IoError("cannot create sequence directory: " + err.message(), dir.string());

    char name[32];
    GeneratedSequence seq = generate_sequence_streamed(
        config, background_preset(e.background_id), e.seed, library, [&](const Frame& f) {
          std::snprintf(name, sizeof(name), "%06d.png", f.index());
          write_png(dir / "img1" / name, f);
        });
    seq.meta.name = e.name;
    const std::string gt_text = serialize_mot(seq.gt);
    write_text_file(dir / "gt" / "gt.txt", gt_text);
    write_text_file(dir / "seqinfo.ini", serialize_seqinfo(seq.meta));
    e.length = seq.meta.length;
    e.gt_checksum = hex64(fnv1a64(gt_text));
  };

  parallel_for(manifest.entries.size(), jobs, [&](std::size_t i) { build_one(manifest.entries[i]); });

  write_text_file(root / "manifest.csv", manifest.to_csv());
  write_text_file(root / "config.json", config.to_json());
  return manifest;
}

}  // namespace mpt::synth
