// mpt: generate, track, evaluate, ablate, render-overlay.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage error (bad flags or configs).

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "mpt/core/dataset.hpp"
#include "mpt/core/error.hpp"
#include "mpt/core/image.hpp"
#include "mpt/core/mot_io.hpp"
#include "mpt/core/overlay.hpp"
#include "mpt/core/parallel.hpp"
#include "mpt/metrics/metrics.hpp"
#include "mpt/synthgen/synthgen.hpp"
#include "mpt/trackers/pipeline.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace mpt;

namespace {

/// Raised while resolving flags and config files, before any output is written.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void setup_logging() {
  auto logger = spdlog::stderr_logger_mt("mpt");
  logger->set_pattern("[%l] %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::info);
  if (const char* env = std::getenv("MPT_LOG")) {
    const auto level = spdlog::level::from_str(env);
    // from_str maps unknown names to off; only honour "off" when asked for.
    if (level != spdlog::level::off || std::string(env) == "off") {
      spdlog::set_level(level);
    } else {
      spdlog::warn("ignoring unknown MPT_LOG level '{}'", env);
    }
  }
}

// Config files and flag values are user input: their errors are usage errors.
template <typename F>
auto resolve(F&& fn) {
  try {
    return fn();
  } catch (const ValidationError& e) {
    throw UsageError(e.what());
  } catch (const ParseError& e) {
    throw UsageError(e.what());
  } catch (const IoError& e) {
    throw UsageError(e.what());
  }
}

std::vector<SequenceDir> require_sequences(const std::string& root, const std::string& split) {
  auto seqs = resolve([&] { return list_sequences(root, split); });
  if (seqs.empty()) throw UsageError("no sequences under " + root + " for split '" + split + "'");
  return seqs;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory: " + ec.message(), dir.string());
}

// ---------------------------------------------------------------------------
// generate

struct GenerateArgs {
  std::string config, out;
  std::optional<std::uint64_t> seed;
  std::optional<int> per_background;
  int jobs = 1;
};

int cmd_generate(const GenerateArgs& a) {
  const synth::ScenarioConfig cfg = resolve([&] {
    synth::ScenarioConfig c = a.config.empty() ? synth::ScenarioConfig{}
                                               : synth::ScenarioConfig::from_json(read_text_file(a.config));
    if (a.seed) c.master_seed = *a.seed;
    if (a.per_background) c.sequences_per_background = *a.per_background;
    c.validate();
    return c;
  });
  spdlog::info("generating {} sequences into {}", kBackgroundCount * cfg.sequences_per_background, a.out);
  const auto manifest = synth::generate_benchmark(cfg, a.out, a.jobs);
  std::printf("%zu sequences, manifest checksum %s\n", manifest.entries.size(), manifest.checksum().c_str());
  return 0;
}

// ---------------------------------------------------------------------------
// track and ablate share the pipeline flags

struct PipelineArgs {
  std::string config;
  std::string tracker, detector, dcm, mfsf;
  std::optional<std::uint64_t> seed;
};

trackers::PipelineConfig pipeline_config(const PipelineArgs& a) {
  return resolve([&] {
    trackers::PipelineConfig c =
        a.config.empty() ? trackers::PipelineConfig{} : trackers::PipelineConfig::from_json(read_text_file(a.config));
    if (!a.tracker.empty()) c.tracker = trackers::parse_tracker_kind(a.tracker);
    if (!a.detector.empty()) c.detector.kind = trackers::parse_detector_kind(a.detector);
    if (!a.dcm.empty()) c.dcm = a.dcm == "on";
    if (!a.mfsf.empty()) c.dsft.fusion.multi_scale = a.mfsf == "on";
    if (a.seed) c.seed = *a.seed;
    c.validate();
    return c;
  });
}

void add_pipeline_flags(CLI::App* cmd, PipelineArgs& a, bool with_tracker) {
  cmd->add_option("--config", a.config, "Pipeline config JSON (partial objects override defaults)")
      ->check(CLI::ExistingFile);
  if (with_tracker) {
    cmd->add_option("--tracker", a.tracker, "Tracker")->check(CLI::IsMember({"sort", "byte", "dsft"}));
    cmd->add_option("--dcm", a.dcm, "Deviation correction of the DSFT features")->check(CLI::IsMember({"on", "off"}));
    cmd->add_option("--mfsf", a.mfsf, "Multi-scale similarity fusion")->check(CLI::IsMember({"on", "off"}));
  }
  cmd->add_option("--detector", a.detector, "Detector")->check(CLI::IsMember({"oracle", "blob"}));
  cmd->add_option("--seed", a.seed, "Detector noise seed");
}

struct TrackArgs {
  std::string dataset, out, split = "all";
  int jobs = 1;
  PipelineArgs pipeline;
};

int cmd_track(const TrackArgs& a) {
  const trackers::PipelineConfig cfg = pipeline_config(a.pipeline);
  const auto seqs = require_sequences(a.dataset, a.split);
  ensure_dir(a.out);
  std::vector<double> seconds(seqs.size(), 0.0);
  parallel_for(seqs.size(), a.jobs, [&](std::size_t i) {
    const auto r = trackers::run_sequence(trackers::load_sequence(seqs[i]), cfg);
    write_mot_file(fs::path(a.out) / (seqs[i].meta.name + ".txt"), r.tracks);
    seconds[i] = r.seconds;
    spdlog::info("{}: {} boxes, {:.2f} s", seqs[i].meta.name, r.tracks.size(), r.seconds);
  });

  std::ostringstream timing;
  timing << "sequence,frames,seconds,fps\n";
  for (std::size_t i = 0; i < seqs.size(); ++i) {
    const int n = seqs[i].meta.length;
    timing << seqs[i].meta.name << ',' << n << ',' << format_real(seconds[i]) << ','
           << format_real(seconds[i] > 0 ? n / seconds[i] : 0.0) << '\n';
  }
  write_text_file(fs::path(a.out) / "timing.csv", timing.str());
  json resolved = json::parse(cfg.to_json());
  resolved["dataset"] = a.dataset;
  resolved["split"] = a.split;
  write_text_file(fs::path(a.out) / "config.json", resolved.dump(2) + "\n");
  std::printf("tracked %zu sequences with %s into %s\n", seqs.size(), trackers::to_string(cfg.tracker).c_str(),
              a.out.c_str());
  return 0;
}

// ---------------------------------------------------------------------------
// evaluate

struct EvaluateArgs {
  std::string dataset, results, out, split = "all";
  int jobs = 1;
};

int cmd_evaluate(const EvaluateArgs& a) {
  require_sequences(a.dataset, a.split);
  const auto report = metrics::evaluate_dataset(a.dataset, a.results, a.split, a.jobs);
  const fs::path out = a.out.empty() ? fs::path(a.results) : fs::path(a.out);
  ensure_dir(out);
  std::vector<std::pair<std::string, metrics::Summary>> rows;
  for (const auto& s : report.per_sequence) rows.emplace_back(s.name, s.summary);
  write_text_file(out / "report.json", report.to_json());
  write_text_file(out / "report.txt", report.to_table());
  write_text_file(out / "sequences.txt", metrics::format_table(rows));
  write_text_file(out / "config.json",
                  json{{"dataset", a.dataset}, {"results", a.results}, {"split", a.split}}.dump(2) + "\n");
  std::fputs(report.to_table().c_str(), stdout);
  return 0;
}

// ---------------------------------------------------------------------------
// ablate

struct AblateArgs {
  std::string dataset, out, split = "all";
  int jobs = 1;
  PipelineArgs pipeline;
};

int cmd_ablate(const AblateArgs& a) {
  const trackers::PipelineConfig base = pipeline_config(a.pipeline);
  const auto seqs = require_sequences(a.dataset, a.split);
  const auto& schemes = trackers::ablation_schemes();
  std::vector<trackers::PipelineConfig> configs;
  for (const auto& s : schemes) configs.push_back(trackers::scheme_config(base, s));
  for (std::size_t k = 0; k < schemes.size(); ++k) ensure_dir(fs::path(a.out) / ("scheme" + std::to_string(k + 1)));

  // scores[k][i]: scheme k on sequence i. All schemes see the same detections.
  std::vector<std::vector<metrics::SequenceScore>> scores(schemes.size(), std::vector<metrics::SequenceScore>(seqs.size()));
  parallel_for(seqs.size(), a.jobs, [&](std::size_t i) {
    const auto input = trackers::load_sequence(seqs[i]);
    const auto runs = trackers::run_configs(input, configs);
    for (std::size_t k = 0; k < schemes.size(); ++k) {
      write_mot_file(fs::path(a.out) / ("scheme" + std::to_string(k + 1)) / (seqs[i].meta.name + ".txt"),
                     runs[k].tracks);
      scores[k][i] = {seqs[i].meta.name, seqs[i].meta.background_id,
                      metrics::Summary::of(metrics::compute_clearmot(input.gt, runs[k].tracks),
                                           metrics::compute_id_scores(input.gt, runs[k].tracks))};
    }
    spdlog::info("{}: 4 schemes done", seqs[i].meta.name);
  });

  std::vector<std::pair<std::string, metrics::Summary>> rows;
  json j = json::array();
  for (std::size_t k = 0; k < schemes.size(); ++k) {
    const auto report = metrics::build_report(scores[k]);
    rows.emplace_back(schemes[k].name, report.aggregate);
    json e = json::parse(report.to_json());
    e["scheme"] = schemes[k].name;
    e["dcm"] = schemes[k].dcm;
    e["mfsf"] = schemes[k].mfsf;
    j.push_back(e);
  }
  const std::string table = metrics::format_table(rows, "Scheme");
  write_text_file(fs::path(a.out) / "ablation.txt", table);
  write_text_file(fs::path(a.out) / "ablation.json", j.dump(2) + "\n");
  json resolved = json::parse(base.to_json());
  resolved["dataset"] = a.dataset;
  resolved["split"] = a.split;
  write_text_file(fs::path(a.out) / "config.json", resolved.dump(2) + "\n");
  std::fputs(table.c_str(), stdout);
  return 0;
}

// ---------------------------------------------------------------------------
// render-overlay

struct OverlayArgs {
  std::string sequence, results, out;
  int first = 1, last = 0;
};

int cmd_render_overlay(const OverlayArgs& a) {
  const SequenceDir dir = resolve([&] {
    SequenceDir d;
    d.path = a.sequence;
    d.meta = parse_seqinfo(read_text_file(d.path / "seqinfo.ini"));
    return d;
  });
  const fs::path results = a.results.empty() ? dir.gt_path() : fs::path(a.results);
  const auto records = resolve([&] { return read_mot_file(results); });
  const int last = a.last > 0 ? std::min(a.last, dir.meta.length) : dir.meta.length;
  if (a.first < 1 || a.first > last) throw UsageError("frame range is empty");
  ensure_dir(a.out);
  for (int f = a.first; f <= last; ++f) {
    Frame frame = read_png_rgb(dir.image_path(f));
    draw_overlay(frame, records_in_frame(records, f));
    char name[32];
    std::snprintf(name, sizeof(name), "%06d.png", f);
    write_png(fs::path(a.out) / name, frame);
  }
  write_text_file(fs::path(a.out) / "config.json",
                  json{{"sequence", a.sequence}, {"results", results.string()}, {"first", a.first}, {"last", last}}
                          .dump(2) + "\n");
  std::printf("rendered frames %d..%d into %s\n", a.first, last, a.out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"Synthetic microscopy multi-object tracking benchmark"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Generate the synthetic benchmark");
  g->add_option("--config", gen.config, "Scenario config JSON")->check(CLI::ExistingFile);
  g->add_option("--out", gen.out, "Dataset root")->required();
  g->add_option("--seed", gen.seed, "Master seed");
  g->add_option("--sequences-per-background", gen.per_background, "Sequences per background");
  g->add_option("--jobs", gen.jobs, "Parallel sequences")->check(CLI::PositiveNumber);

  TrackArgs track;
  auto* t = app.add_subcommand("track", "Run a tracker over a dataset");
  t->add_option("--dataset", track.dataset, "Dataset root")->required();
  t->add_option("--out", track.out, "Results directory")->required();
  t->add_option("--split", track.split, "Split")->check(CLI::IsMember({"train", "test", "all"}));
  t->add_option("--jobs", track.jobs, "Parallel sequences")->check(CLI::PositiveNumber);
  add_pipeline_flags(t, track.pipeline, true);

  EvaluateArgs eval;
  auto* e = app.add_subcommand("evaluate", "Score result files against ground truth");
  e->add_option("--dataset", eval.dataset, "Dataset root")->required();
  e->add_option("--results", eval.results, "Directory of <sequence>.txt result files")->required();
  e->add_option("--out", eval.out, "Report directory (default: the results directory)");
  e->add_option("--split", eval.split, "Split")->check(CLI::IsMember({"train", "test", "all"}));
  e->add_option("--jobs", eval.jobs, "Parallel sequences")->check(CLI::PositiveNumber);

  AblateArgs abl;
  auto* b = app.add_subcommand("ablate", "Compare the four DSFT module schemes");
  b->add_option("--dataset", abl.dataset, "Dataset root")->required();
  b->add_option("--out", abl.out, "Output directory")->required();
  b->add_option("--split", abl.split, "Split")->check(CLI::IsMember({"train", "test", "all"}));
  b->add_option("--jobs", abl.jobs, "Parallel sequences")->check(CLI::PositiveNumber);
  add_pipeline_flags(b, abl.pipeline, false);

  OverlayArgs ov;
  auto* o = app.add_subcommand("render-overlay", "Draw id-coloured boxes onto a sequence's frames");
  o->add_option("--sequence", ov.sequence, "Sequence directory")->required()->check(CLI::ExistingDirectory);
  o->add_option("--results", ov.results, "MOT file to draw (default: ground truth)");
  o->add_option("--out", ov.out, "Output directory")->required();
  o->add_option("--first", ov.first, "First frame");
  o->add_option("--last", ov.last, "Last frame (default: sequence length)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*g) return cmd_generate(gen);
    if (*t) return cmd_track(track);
    if (*e) return cmd_evaluate(eval);
    if (*b) return cmd_ablate(abl);
    if (*o) return cmd_render_overlay(ov);
  } catch (const UsageError& err) {
    spdlog::error("{}", err.what());
    std::fprintf(stderr, "%s", app.help().c_str());
    return 2;
  } catch (const std::exception& err) {
    spdlog::error("{}", err.what());
    return 1;
  }
  return 2;
}
