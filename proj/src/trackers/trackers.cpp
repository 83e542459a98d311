#include "mpt/trackers/trackers.hpp"

#include <algorithm>

#include "mpt/core/error.hpp"

namespace mpt::trackers {

BoundingBox kalman_predict(Track& track) {
  track.kf.predict();
  return track.kf.box();
}

Track kalman_update(const Track& track, const Detection& det) {
  Track out = track;
  out.kf.update(det.box);
  out.last_box = det.box;
  out.score = det.score;
  return out;
}

std::vector<GtRecord> TrackerBase::output(int frame) const {
  std::vector<GtRecord> out;
  for (const Track& t : tracks_) {
    if (!t.matched || t.status == TrackStatus::Dead) continue;
    if (t.status != TrackStatus::Confirmed && frame > config_.n_init) continue;
    GtRecord r;
    r.frame = frame;
    r.id = t.id;
    r.box = t.last_box;
    r.conf = t.score;
    r.class_id = 0;
    r.visibility = 1.0;
    out.push_back(r);
  }
  std::sort(out.begin(), out.end(), [](const GtRecord& a, const GtRecord& b) { return a.id < b.id; });
  return out;
}

void TrackerBase::begin_step() {
  for (Track& t : tracks_) t.matched = false;
}

void TrackerBase::mark_matched(Track& track, const Detection& det) {
  track = kalman_update(track, det);
  track.matched = true;
  track.hits += 1;
  track.misses = 0;
  if (track.status == TrackStatus::Tentative && track.hits >= config_.n_init) track.status = TrackStatus::Confirmed;
}

void TrackerBase::mark_missed(Track& track, const BoundingBox& coast_box) {
  track.matched = false;
  track.hits = 0;
  track.misses += 1;
  track.last_box = coast_box;
  if (track.status == TrackStatus::Tentative || track.misses > config_.max_age) track.status = TrackStatus::Dead;
}

void TrackerBase::spawn(const Detection& det) {
  Track t;
  t.id = next_id_++;
  t.kf = KalmanBoxFilter(det.box, config_.noise);
  t.hits = 1;
  t.misses = 0;
  t.last_box = det.box;
  t.score = det.score;
  t.matched = true;
  t.status = t.hits >= config_.n_init ? TrackStatus::Confirmed : TrackStatus::Tentative;
  tracks_.push_back(std::move(t));
}

void TrackerBase::remove_dead() {
  std::erase_if(tracks_, [](const Track& t) { return t.status == TrackStatus::Dead; });
}

namespace {

// Predicted boxes for all tracks; the filter always advances so its velocity
// estimate stays consistent, but without a motion model the last box is used.
std::vector<BoundingBox> predict_all(std::vector<Track>& tracks, bool use_motion_model) {
  std::vector<BoundingBox> out;
  out.reserve(tracks.size());
  for (Track& t : tracks) {
    const BoundingBox p = kalman_predict(t);
    out.push_back(use_motion_model ? p : t.last_box);
  }
  return out;
}

Eigen::MatrixXd iou_cost(const std::vector<BoundingBox>& boxes, const std::vector<int>& rows,
                         std::span<const Detection> dets, const std::vector<int>& cols) {
  Eigen::MatrixXd c(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) c(i, j) = 1.0 - iou(boxes[rows[i]], dets[cols[j]].box);
  }
  return c;
}

std::vector<int> iota(std::size_t n) {
  std::vector<int> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<int>(i);
  return v;
}

}  // namespace

std::vector<GtRecord> SortTracker::step(int frame, std::span<const Detection> detections) {
  begin_step();
  const std::vector<BoundingBox> predicted = predict_all(tracks_, config_.use_motion_model);
  const std::vector<int> rows = iota(tracks_.size());
  const std::vector<int> cols = iota(detections.size());
  const Assignment a = hungarian_assign(iou_cost(predicted, rows, detections, cols), 1.0 - config_.iou_min);
  for (const auto& [r, c] : a.pairs) mark_matched(tracks_[r], detections[c]);
  for (const int r : a.unmatched_rows) mark_missed(tracks_[r], predicted[r]);
  for (const int c : a.unmatched_cols) spawn(detections[c]);
  remove_dead();
  return output(frame);
}

std::vector<GtRecord> ByteTracker::step(int frame, std::span<const Detection> detections) {
  begin_step();
  const std::vector<BoundingBox> predicted = predict_all(tracks_, config_.use_motion_model);
  std::vector<int> high, low;
  for (std::size_t j = 0; j < detections.size(); ++j) {
    if (detections[j].score >= config_.tau_high) {
      high.push_back(static_cast<int>(j));
    } else if (detections[j].score >= config_.tau_low) {
      low.push_back(static_cast<int>(j));
    }
  }
  const double gate = 1.0 - config_.iou_min;

  const std::vector<int> all_tracks = iota(tracks_.size());
  const Assignment first = hungarian_assign(iou_cost(predicted, all_tracks, detections, high), gate);
  std::vector<char> matched(tracks_.size(), 0);
  for (const auto& [r, c] : first.pairs) {
    mark_matched(tracks_[all_tracks[r]], detections[high[c]]);
    matched[all_tracks[r]] = 1;
  }

  std::vector<int> remaining;
  for (const int r : first.unmatched_rows) {
    if (tracks_[all_tracks[r]].status == TrackStatus::Confirmed) remaining.push_back(all_tracks[r]);
  }
  const Assignment second = hungarian_assign(iou_cost(predicted, remaining, detections, low), gate);
  for (const auto& [r, c] : second.pairs) {
    mark_matched(tracks_[remaining[r]], detections[low[c]]);
    matched[remaining[r]] = 1;
  }

  for (std::size_t i = 0; i < matched.size(); ++i) {
    if (!matched[i]) mark_missed(tracks_[i], predicted[i]);
  }
  for (const int c : first.unmatched_cols) spawn(detections[high[c]]);
  remove_dead();
  return output(frame);
}

double dsft_cost(double alpha, double iou_value, double phi) {
  return alpha * (1.0 - iou_value) + (1.0 - alpha) * (1.0 - phi / 3.0);
}

double dsft_gate(double alpha, double iou_min) { return dsft_cost(alpha, iou_min, 0.0); }

std::vector<GtRecord> DsftTracker::step(int frame, std::span<const Detection> detections,
                                        const features::FeaturePyramid* prev, const features::FeaturePyramid* cur) {
  if (prev == nullptr || cur == nullptr) throw ValidationError("DSFT step needs feature pyramids for frames t-1 and t");
  begin_step();
  std::vector<Detection> dets;
  for (const Detection& d : detections) {
    if (d.score >= dsft_.detection_threshold) dets.push_back(d);
  }

  const std::size_t n = tracks_.size();
  std::vector<BoundingBox> propagated;
  propagated.reserve(n);
  Eigen::MatrixXd cost(n, dets.size());
  for (std::size_t i = 0; i < n; ++i) {
    Track& t = tracks_[i];
    kalman_predict(t);
    if (!dsft_.use_similarity) {
      propagated.push_back(t.last_box);
      for (std::size_t j = 0; j < dets.size(); ++j) cost(i, j) = dsft_cost(dsft_.alpha, iou(t.last_box, dets[j].box), 0.0);
      continue;
    }
    const similarity::SimilarityVolume vol = similarity::compute_volume(*prev, *cur, t.last_box.center(), dsft_.fusion);
    const Point2 off = similarity::predict_offset(vol.fused);
    propagated.push_back(t.last_box.translated(off.x, off.y));
    for (std::size_t j = 0; j < dets.size(); ++j) {
      cost(i, j) = dsft_cost(dsft_.alpha, iou(propagated.back(), dets[j].box), vol.at_pixel(dets[j].box.center()));
    }
  }

  const Assignment a = hungarian_assign(cost, dsft_gate(dsft_.alpha, config_.iou_min));
  for (const auto& [r, c] : a.pairs) mark_matched(tracks_[r], dets[c]);
  for (const int r : a.unmatched_rows) mark_missed(tracks_[r], propagated[r]);
  for (const int c : a.unmatched_cols) spawn(dets[c]);
  remove_dead();
  return output(frame);
}

}  // namespace mpt::trackers
