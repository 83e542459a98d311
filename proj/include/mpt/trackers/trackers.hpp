#pragma once

#include <span>
#include <vector>

#include "mpt/core/records.hpp"
#include "mpt/features/features.hpp"
#include "mpt/similarity/similarity.hpp"
#include "mpt/trackers/assignment.hpp"
#include "mpt/trackers/kalman.hpp"

namespace mpt::trackers {

enum class TrackStatus { Tentative, Confirmed, Dead };

struct Track {
  int id = 0;
  KalmanBoxFilter kf;
  int hits = 0;    ///< consecutive matched frames
  int misses = 0;  ///< consecutive unmatched frames
  TrackStatus status = TrackStatus::Tentative;
  BoundingBox last_box{0, 0, 1, 1};
  double score = 0.0;  ///< score of the last matched detection
  bool matched = false;  ///< matched in the most recent step
};

/// Constant-velocity prediction; advances the track's filter.
BoundingBox kalman_predict(Track& track);
/// Filter update with a detection; also records the detection as `last_box`.
Track kalman_update(const Track& track, const Detection& det);

struct TrackerConfig {
  int n_init = 2;     ///< consecutive hits before a tentative track is confirmed
  int max_age = 10;   ///< confirmed tracks die after more than this many misses
  double iou_min = 0.3;
  double tau_high = 0.5;  ///< ByteTrack first-stage score threshold
  double tau_low = 0.1;   ///< ByteTrack second-stage score threshold
  bool use_motion_model = true;  ///< false: predicted box = last box
  KalmanNoise noise;
};

/// Owns the track list and the lifecycle rules shared by every tracker:
/// matched tracks gain a hit (tentative tracks are confirmed at n_init hits),
/// unmatched tentative tracks die at once, unmatched confirmed tracks die when
/// misses exceed max_age, and ids are handed out in increasing order.
class TrackerBase {
 public:
  explicit TrackerBase(TrackerConfig config) : config_(config) {}
  virtual ~TrackerBase() = default;

  const std::vector<Track>& tracks() const noexcept { return tracks_; }
  const TrackerConfig& config() const noexcept { return config_; }

  /// Boxes reported for the current frame: tracks matched in this step that are
  /// confirmed, plus every matched track while frame <= n_init (warm-up).
  std::vector<GtRecord> output(int frame) const;

 protected:
  void begin_step();
  void mark_matched(Track& track, const Detection& det);
  /// `coast_box` becomes the track's last box.
  void mark_missed(Track& track, const BoundingBox& coast_box);
  void spawn(const Detection& det);
  void remove_dead();

  TrackerConfig config_;
  std::vector<Track> tracks_;
  int next_id_ = 1;
};

/// SORT: Kalman prediction, 1 - IoU cost, Hungarian with gate 1 - iou_min.
class SortTracker : public TrackerBase {
 public:
  explicit SortTracker(TrackerConfig config = {}) : TrackerBase(config) {}
  std::vector<GtRecord> step(int frame, std::span<const Detection> detections);
};

/// ByteTrack: high-score detections against all tracks, then low-score
/// detections against the confirmed tracks left over.
class ByteTracker : public TrackerBase {
 public:
  explicit ByteTracker(TrackerConfig config = {}) : TrackerBase(config) {}
  std::vector<GtRecord> step(int frame, std::span<const Detection> detections);
};

struct DsftConfig {
  double detection_threshold = 0.4;
  double alpha = 0.7;  ///< weight of the IoU term in the association cost
  similarity::FusionConfig fusion;
  bool use_similarity = true;  ///< false: zero offsets and zero similarity
};

/// Association cost alpha (1 - IoU) + (1 - alpha)(1 - phi / 3).
double dsft_cost(double alpha, double iou_value, double phi);
/// Largest admissible cost: the cost at IoU = iou_min and phi = 0.
double dsft_gate(double alpha, double iou_min);

/// Tracks are propagated by the similarity-predicted offset and associated on
/// a blend of IoU after propagation and fused similarity at the detection centre.
class DsftTracker : public TrackerBase {
 public:
  explicit DsftTracker(TrackerConfig config = {}, DsftConfig dsft = {}) : TrackerBase(config), dsft_(dsft) {}

  /// `prev` and `cur` are the (corrected) pyramids of frames t-1 and t. Throws
  /// ValidationError when either is missing.
  std::vector<GtRecord> step(int frame, std::span<const Detection> detections, const features::FeaturePyramid* prev,
                             const features::FeaturePyramid* cur);

  const DsftConfig& dsft_config() const noexcept { return dsft_; }

 private:
  DsftConfig dsft_;
};

}  // namespace mpt::trackers
