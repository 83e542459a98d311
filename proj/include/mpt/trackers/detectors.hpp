#pragma once

#include <span>
#include <vector>

#include "mpt/core/image.hpp"
#include "mpt/core/random.hpp"
#include "mpt/core/records.hpp"

namespace mpt::trackers {

enum class DetectorKind { OracleNoise, Blob };

/// Ground truth corrupted by misses, corner jitter and spurious boxes.
///
/// Score model: a kept box scores high_max - (high_max - high_min)(1 - IoU(jittered, gt)),
/// so noiseless boxes score high_max; spurious boxes score uniformly in [low_min, low_max].
/// Spurious boxes have sides uniform in [spurious_size_min, spurious_size_max] and lie inside the frame.
struct OracleNoiseConfig {
  double p_fn = 0.0;
  double p_fp = 0.0;  ///< Poisson mean of spurious boxes per frame
  double jitter_sigma = 0.0;
  double high_min = 0.6;
  double high_max = 1.0;
  double low_min = 0.1;
  double low_max = 0.5;
  double spurious_size_min = 8.0;
  double spurious_size_max = 48.0;

  void validate() const;
};

struct BlobConfig {
  int diff_threshold = 30;  ///< max-channel |frame - background| above this is foreground
  int min_area = 12;        ///< pixels
};

struct DetectorConfig {
  DetectorKind kind = DetectorKind::OracleNoise;
  OracleNoiseConfig oracle;
  BlobConfig blob;

  void validate() const;
};

std::vector<Detection> oracle_noise_detector(std::span<const GtRecord> gt_frame_records, int frame, int width,
                                             int height, Rng& rng, const OracleNoiseConfig& cfg);

/// 8-connected foreground components of at least min_area pixels; score is the
/// component's mean max-channel difference / 255. Throws ShapeError on size mismatch.
std::vector<Detection> blob_detector(const Frame& frame, const Frame& background_model, const BlobConfig& cfg);

/// Per-pixel, per-channel temporal median over at most `max_samples` evenly
/// spaced frames (lower median for even counts). Throws ValidationError when
/// `frames` is empty or sizes differ.
Frame estimate_background(std::span<const Frame> frames, int max_samples = 25);

/// Indices (0-based) of the frames estimate_background samples from a sequence of `count` frames.
std::vector<int> background_sample_indices(int count, int max_samples = 25);

}  // namespace mpt::trackers
