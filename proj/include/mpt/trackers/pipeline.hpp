#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mpt/core/dataset.hpp"
#include "mpt/core/image.hpp"
#include "mpt/core/records.hpp"
#include "mpt/features/features.hpp"
#include "mpt/trackers/detectors.hpp"
#include "mpt/trackers/trackers.hpp"

namespace mpt::trackers {

enum class TrackerKind { Sort, Byte, Dsft };

std::string to_string(TrackerKind kind);
/// "sort", "byte" or "dsft"; throws ValidationError otherwise.
TrackerKind parse_tracker_kind(const std::string& name);
std::string to_string(DetectorKind kind);
/// "oracle" or "blob"; throws ValidationError otherwise.
DetectorKind parse_detector_kind(const std::string& name);

struct PipelineConfig {
  TrackerKind tracker = TrackerKind::Dsft;
  TrackerConfig tracking;
  DsftConfig dsft;
  bool dcm = true;  ///< deviation correction of the DSFT feature pyramids
  features::CorrectionConfig correction;
  features::ExtractorConfig extractor;
  DetectorConfig detector;
  std::uint64_t seed = 1;      ///< detector noise; mixed with the sequence seed
  int background_samples = 25;  ///< frames used for the median background model

  void validate() const;
  std::string to_json() const;
  /// Partial JSON objects override defaults; unknown keys are rejected.
  static PipelineConfig from_json(const std::string& text);
};

/// Lazily loaded frames, indexed 1..count.
struct FrameSource {
  int count = 0;
  std::function<Frame(int)> load;
};

FrameSource memory_source(const std::vector<Frame>& frames);
FrameSource directory_source(const SequenceDir& dir);

struct SequenceInput {
  SequenceMeta meta;
  FrameSource frames;
  std::vector<GtRecord> gt;  ///< used by the oracle detector only
};

SequenceInput load_sequence(const SequenceDir& dir);

struct RunResult {
  std::vector<GtRecord> tracks;
  double seconds = 0.0;  ///< wall time of the tracking loop, shared detection included
};

/// Runs several configurations over one sequence in lockstep. All configs must
/// share the detector settings and seed, so every tracker sees the same
/// detections; feature pyramids are also computed once per frame. Throws
/// ValidationError when the detector settings differ.
std::vector<RunResult> run_configs(const SequenceInput& input, const std::vector<PipelineConfig>& configs);
RunResult run_sequence(const SequenceInput& input, const PipelineConfig& config);

struct AblationScheme {
  std::string name;
  bool dcm = false;
  bool mfsf = false;
};

/// Scheme 1 (DSFT without correction, deep scale only), +DCM, +MFSF, +both.
const std::array<AblationScheme, 4>& ablation_schemes();
/// `base` with tracker = dsft and the scheme's switches applied.
PipelineConfig scheme_config(const PipelineConfig& base, const AblationScheme& scheme);

/// Background model from the sampled frames of a source.
Frame estimate_background(const FrameSource& source, int max_samples);

}  // namespace mpt::trackers
