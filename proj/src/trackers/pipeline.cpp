#include "mpt/trackers/pipeline.hpp"

#include <chrono>
#include <map>
#include <memory>
#include <set>
#include <variant>

#include <nlohmann/json.hpp>

#include "mpt/core/error.hpp"
#include "mpt/core/mot_io.hpp"

namespace mpt::trackers {

using nlohmann::json;

std::string to_string(TrackerKind kind) {
  switch (kind) {
    case TrackerKind::Sort: return "sort";
    case TrackerKind::Byte: return "byte";
    case TrackerKind::Dsft: return "dsft";
  }
  return "?";
}

TrackerKind parse_tracker_kind(const std::string& name) {
  if (name == "sort") return TrackerKind::Sort;
  if (name == "byte") return TrackerKind::Byte;
  if (name == "dsft") return TrackerKind::Dsft;
  throw ValidationError("unknown tracker '" + name + "' (expected sort, byte or dsft)");
}

std::string to_string(DetectorKind kind) { return kind == DetectorKind::Blob ? "blob" : "oracle"; }

DetectorKind parse_detector_kind(const std::string& name) {
  if (name == "oracle") return DetectorKind::OracleNoise;
  if (name == "blob") return DetectorKind::Blob;
  throw ValidationError("unknown detector '" + name + "' (expected oracle or blob)");
}

// ---------------------------------------------------------------------------
// Config

void PipelineConfig::validate() const {
  detector.validate();
  if (tracking.n_init < 1) throw ValidationError("n_init must be >= 1");
  if (tracking.max_age < 0) throw ValidationError("max_age must be >= 0");
  if (!(tracking.iou_min >= 0.0 && tracking.iou_min <= 1.0)) throw ValidationError("iou_min must be in [0,1]");
  if (!(tracking.tau_low >= 0.0 && tracking.tau_low <= tracking.tau_high && tracking.tau_high <= 1.0)) {
    throw ValidationError("score thresholds must satisfy 0 <= tau_low <= tau_high <= 1");
  }
  if (!(dsft.alpha >= 0.0 && dsft.alpha <= 1.0)) throw ValidationError("alpha must be in [0,1]");
  if (dsft.fusion.radius < 1) throw ValidationError("search radius must be >= 1");
  if (!(correction.suppression >= 0.0 && correction.suppression <= 1.0)) {
    throw ValidationError("suppression must be in [0,1]");
  }
  if (background_samples < 1) throw ValidationError("background_samples must be >= 1");
  if (extractor.field_factor < 1) throw ValidationError("field_factor must be >= 1");
}

std::string PipelineConfig::to_json() const {
  json j;
  j["tracker"] = trackers::to_string(tracker);
  j["tracking"] = {{"n_init", tracking.n_init},
                   {"max_age", tracking.max_age},
                   {"iou_min", tracking.iou_min},
                   {"tau_high", tracking.tau_high},
                   {"tau_low", tracking.tau_low},
                   {"use_motion_model", tracking.use_motion_model},
                   {"noise",
                    {{"position", tracking.noise.position},
                     {"velocity", tracking.noise.velocity},
                     {"measurement", tracking.noise.measurement}}}};
  j["dsft"] = {{"detection_threshold", dsft.detection_threshold},
               {"alpha", dsft.alpha},
               {"radius", dsft.fusion.radius},
               {"mfsf", dsft.fusion.multi_scale},
               {"use_similarity", dsft.use_similarity}};
  j["dcm"] = dcm;
  j["correction"] = {{"suppression", correction.suppression},
                     {"foreground_threshold", correction.foreground_threshold},
                     {"levels", correction.levels}};
  j["extractor"] = {{"gradient_gain", extractor.gradient_gain},
                    {"color_gain", extractor.color_gain},
                    {"contrast_gain", extractor.contrast_gain},
                    {"field_factor", extractor.field_factor},
                    {"aggregation", extractor.aggregation == features::Aggregation::Tent ? "tent" : "box"}};
  const OracleNoiseConfig& o = detector.oracle;
  j["detector"] = {{"kind", trackers::to_string(detector.kind)},
                   {"oracle",
                    {{"p_fn", o.p_fn},
                     {"p_fp", o.p_fp},
                     {"jitter_sigma", o.jitter_sigma},
                     {"high_min", o.high_min},
                     {"high_max", o.high_max},
                     {"low_min", o.low_min},
                     {"low_max", o.low_max},
                     {"spurious_size_min", o.spurious_size_min},
                     {"spurious_size_max", o.spurious_size_max}}},
                   {"blob", {{"diff_threshold", detector.blob.diff_threshold}, {"min_area", detector.blob.min_area}}}};
  j["seed"] = seed;
  j["background_samples"] = background_samples;
  return j.dump(2) + "\n";
}

namespace {

// Reads the keys present in `obj` into fields, rejecting keys not in the schema.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ValidationError("pipeline config: " + path_ + " must be an object");
  }

  template <typename T>
  void read(const char* key, T& out) {
    known_.insert(key);
    if (!obj_.contains(key)) return;
    try {
      out = obj_.at(key).get<T>();
    } catch (const json::exception&) {
      throw ValidationError("pipeline config: " + path_ + key + " has the wrong type");
    }
  }

  const json* child(const char* key) {
    known_.insert(key);
    return obj_.contains(key) ? &obj_.at(key) : nullptr;
  }

  void finish() const {
    for (const auto& item : obj_.items()) {
      if (item.key() == "$schema") continue;
      if (!known_.count(item.key())) throw ValidationError("pipeline config: unknown key '" + path_ + item.key() + "'");
    }
  }

 private:
  const json& obj_;
  std::string path_;
  std::set<std::string> known_;
};

}  // namespace

PipelineConfig PipelineConfig::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("pipeline config is not valid JSON: ") + e.what(), 0);
  }
  PipelineConfig c;
  ObjectReader root(j, "");
  std::string tracker_name = trackers::to_string(c.tracker);
  root.read("tracker", tracker_name);
  c.tracker = parse_tracker_kind(tracker_name);
  if (const json* t = root.child("tracking")) {
    ObjectReader r(*t, "tracking.");
    r.read("n_init", c.tracking.n_init);
    r.read("max_age", c.tracking.max_age);
    r.read("iou_min", c.tracking.iou_min);
    r.read("tau_high", c.tracking.tau_high);
    r.read("tau_low", c.tracking.tau_low);
    r.read("use_motion_model", c.tracking.use_motion_model);
    if (const json* n = r.child("noise")) {
      ObjectReader rn(*n, "tracking.noise.");
      rn.read("position", c.tracking.noise.position);
      rn.read("velocity", c.tracking.noise.velocity);
      rn.read("measurement", c.tracking.noise.measurement);
      rn.finish();
    }
    r.finish();
  }
  if (const json* d = root.child("dsft")) {
    ObjectReader r(*d, "dsft.");
    r.read("detection_threshold", c.dsft.detection_threshold);
    r.read("alpha", c.dsft.alpha);
    r.read("radius", c.dsft.fusion.radius);
    r.read("mfsf", c.dsft.fusion.multi_scale);
    r.read("use_similarity", c.dsft.use_similarity);
    r.finish();
  }
  root.read("dcm", c.dcm);
  if (const json* d = root.child("correction")) {
    ObjectReader r(*d, "correction.");
    r.read("suppression", c.correction.suppression);
    r.read("foreground_threshold", c.correction.foreground_threshold);
    r.read("levels", c.correction.levels);
    r.finish();
  }
  if (const json* d = root.child("extractor")) {
    ObjectReader r(*d, "extractor.");
    r.read("gradient_gain", c.extractor.gradient_gain);
    r.read("color_gain", c.extractor.color_gain);
    r.read("contrast_gain", c.extractor.contrast_gain);
    r.read("field_factor", c.extractor.field_factor);
    std::string aggregation = c.extractor.aggregation == features::Aggregation::Tent ? "tent" : "box";
    r.read("aggregation", aggregation);
    if (aggregation == "tent") {
      c.extractor.aggregation = features::Aggregation::Tent;
    } else if (aggregation == "box") {
      c.extractor.aggregation = features::Aggregation::Box;
    } else {
      throw ValidationError("extractor.aggregation must be \"box\" or \"tent\", got \"" + aggregation + "\"");
    }
    r.finish();
  }
  if (const json* d = root.child("detector")) {
    ObjectReader r(*d, "detector.");
    std::string kind = trackers::to_string(c.detector.kind);
    r.read("kind", kind);
    c.detector.kind = parse_detector_kind(kind);
    if (const json* o = r.child("oracle")) {
      ObjectReader ro(*o, "detector.oracle.");
      OracleNoiseConfig& oc = c.detector.oracle;
      ro.read("p_fn", oc.p_fn);
      ro.read("p_fp", oc.p_fp);
      ro.read("jitter_sigma", oc.jitter_sigma);
      ro.read("high_min", oc.high_min);
      ro.read("high_max", oc.high_max);
      ro.read("low_min", oc.low_min);
      ro.read("low_max", oc.low_max);
      ro.read("spurious_size_min", oc.spurious_size_min);
      ro.read("spurious_size_max", oc.spurious_size_max);
      ro.finish();
    }
    if (const json* b = r.child("blob")) {
      ObjectReader rb(*b, "detector.blob.");
      rb.read("diff_threshold", c.detector.blob.diff_threshold);
      rb.read("min_area", c.detector.blob.min_area);
      rb.finish();
    }
    r.finish();
  }
  root.read("seed", c.seed);
  root.read("background_samples", c.background_samples);
  root.finish();
  c.validate();
  return c;
}

// ---------------------------------------------------------------------------
// Sources

FrameSource memory_source(const std::vector<Frame>& frames) {
  return {static_cast<int>(frames.size()), [&frames](int f) {
            Frame out = frames.at(static_cast<std::size_t>(f - 1));
            out.set_index(f);
            return out;
          }};
}

FrameSource directory_source(const SequenceDir& dir) {
  return {dir.meta.length, [dir](int f) {
            Frame out = read_png_rgb(dir.image_path(f));
            if (out.width() != dir.meta.width || out.height() != dir.meta.height) {
              throw ShapeError("frame " + dir.image_path(f).string() + " does not match seqinfo dimensions");
            }
            out.set_index(f);
            return out;
          }};
}

SequenceInput load_sequence(const SequenceDir& dir) {
  SequenceInput in;
  in.meta = dir.meta;
  in.frames = directory_source(dir);
  if (std::filesystem::exists(dir.gt_path())) in.gt = read_mot_file(dir.gt_path());
  return in;
}

Frame estimate_background(const FrameSource& source, int max_samples) {
  std::vector<Frame> samples;
  for (const int i : background_sample_indices(source.count, max_samples)) samples.push_back(source.load(i + 1));
  return estimate_background(std::span<const Frame>(samples), static_cast<int>(samples.size()));
}

// ---------------------------------------------------------------------------
// Runs

const std::array<AblationScheme, 4>& ablation_schemes() {
  static const std::array<AblationScheme, 4> schemes = {{
      {"Scheme 1 (baseline)", false, false},
      {"Scheme 2 (+DCM)", true, false},
      {"Scheme 3 (+MFSF)", false, true},
      {"Scheme 4 (+DCM +MFSF)", true, true},
  }};
  return schemes;
}

PipelineConfig scheme_config(const PipelineConfig& base, const AblationScheme& scheme) {
  PipelineConfig c = base;
  c.tracker = TrackerKind::Dsft;
  c.dcm = scheme.dcm;
  c.dsft.fusion.multi_scale = scheme.mfsf;
  return c;
}

namespace {

using AnyTracker = std::variant<SortTracker, ByteTracker, DsftTracker>;

AnyTracker make_tracker(const PipelineConfig& c) {
  switch (c.tracker) {
    case TrackerKind::Sort: return SortTracker(c.tracking);
    case TrackerKind::Byte: return ByteTracker(c.tracking);
    case TrackerKind::Dsft: return DsftTracker(c.tracking, c.dsft);
  }
  throw ValidationError("unknown tracker kind");
}

std::string detection_key(const PipelineConfig& c) {
  json j = json::parse(c.to_json());
  return json{{"detector", j["detector"]}, {"seed", c.seed}, {"samples", c.background_samples}}.dump();
}

std::string pyramid_key(const PipelineConfig& c) {
  json j = json::parse(c.to_json());
  if (!c.dcm) return json{{"extractor", j["extractor"]}}.dump();
  return json{{"extractor", j["extractor"]}, {"correction", j["correction"]}}.dump();
}

std::string extractor_key(const features::ExtractorConfig& e) {
  return json{{"g", e.gradient_gain}, {"c", e.color_gain}, {"k", e.contrast_gain}, {"f", e.field_factor},
              {"a", static_cast<int>(e.aggregation)}}.dump();
}

struct PyramidStream {
  bool dcm = false;
  features::CorrectionConfig correction;
  features::ExtractorConfig extractor;
  std::unique_ptr<features::FeaturePyramid> prev;
  std::unique_ptr<features::FeaturePyramid> cur;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

}  // namespace

std::vector<RunResult> run_configs(const SequenceInput& input, const std::vector<PipelineConfig>& configs) {
  std::vector<RunResult> results(configs.size());
  if (configs.empty()) return results;
  for (const PipelineConfig& c : configs) c.validate();
  const std::string det_key = detection_key(configs.front());
  for (const PipelineConfig& c : configs) {
    if (detection_key(c) != det_key) throw ValidationError("configurations run together must share detector settings");
  }
  const PipelineConfig& lead = configs.front();

  const auto t_setup = Clock::now();
  bool need_background = lead.detector.kind == DetectorKind::Blob;
  std::map<std::string, PyramidStream> streams;
  std::vector<PyramidStream*> stream_of(configs.size(), nullptr);
  for (std::size_t i = 0; i < configs.size(); ++i) {
    const PipelineConfig& c = configs[i];
    if (c.tracker != TrackerKind::Dsft) continue;
    need_background = need_background || c.dcm;
    auto [it, inserted] = streams.try_emplace(pyramid_key(c));
    if (inserted) {
      it->second.dcm = c.dcm;
      it->second.correction = c.correction;
      it->second.extractor = c.extractor;
    }
    stream_of[i] = &it->second;
  }
  const Frame background = need_background ? estimate_background(input.frames, lead.background_samples) : Frame();
  Rng det_rng(derive_seed(lead.seed, input.meta.seed));

  std::vector<AnyTracker> trackers;
  trackers.reserve(configs.size());
  for (const PipelineConfig& c : configs) trackers.push_back(make_tracker(c));
  double shared = seconds_since(t_setup);
  std::vector<double> own(configs.size(), 0.0);

  for (int f = 1; f <= input.frames.count; ++f) {
    const auto t_frame = Clock::now();
    Frame frame = input.frames.load(f);
    frame.set_index(f);
    std::vector<Detection> dets;
    if (lead.detector.kind == DetectorKind::Blob) {
      dets = blob_detector(frame, background, lead.detector.blob);
    } else {
      const std::vector<GtRecord> gt = records_in_frame(input.gt, f);
      dets = oracle_noise_detector(gt, f, input.meta.width > 0 ? input.meta.width : frame.width(),
                                   input.meta.height > 0 ? input.meta.height : frame.height(), det_rng,
                                   lead.detector.oracle);
    }
    std::map<std::string, features::FeaturePyramid> raw_by_extractor;
    for (auto& [key, s] : streams) {
      const std::string ekey = extractor_key(s.extractor);
      auto it = raw_by_extractor.find(ekey);
      if (it == raw_by_extractor.end()) it = raw_by_extractor.emplace(ekey, features::extract_pyramid(frame, s.extractor)).first;
      const features::FeaturePyramid& raw = it->second;
      auto next = std::make_unique<features::FeaturePyramid>(
          s.dcm ? features::correct_deviation(raw, features::predict_residual(frame, raw, background, s.correction,
                                                                              s.extractor))
                : features::normalize(raw));
      s.prev = std::move(s.cur);
      s.cur = std::move(next);
    }
    shared += seconds_since(t_frame);

    for (std::size_t i = 0; i < trackers.size(); ++i) {
      const auto t_step = Clock::now();
      std::vector<GtRecord> out;
      if (auto* s = std::get_if<SortTracker>(&trackers[i])) {
        out = s->step(f, dets);
      } else if (auto* b = std::get_if<ByteTracker>(&trackers[i])) {
        out = b->step(f, dets);
      } else {
        auto& d = std::get<DsftTracker>(trackers[i]);
        const PyramidStream& s = *stream_of[i];
        // On the first frame there is no earlier pyramid; no track exists yet either.
        out = d.step(f, dets, s.prev ? s.prev.get() : s.cur.get(), s.cur.get());
      }
      results[i].tracks.insert(results[i].tracks.end(), out.begin(), out.end());
      own[i] += seconds_since(t_step);
    }
  }
  for (std::size_t i = 0; i < results.size(); ++i) results[i].seconds = shared + own[i];
  return results;
}

RunResult run_sequence(const SequenceInput& input, const PipelineConfig& config) {
  return run_configs(input, {config}).front();
}

}  // namespace mpt::trackers
