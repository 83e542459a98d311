#pragma once

#include <Eigen/Core>

#include "mpt/core/geometry.hpp"

namespace mpt::trackers {

using StateVector = Eigen::Matrix<double, 8, 1>;
using StateMatrix = Eigen::Matrix<double, 8, 8>;

/// Noise standard deviations as fractions of the box size (w for x terms, h for y terms).
struct KalmanNoise {
  double position = 1.0 / 20.0;
  double velocity = 1.0 / 160.0;
  double measurement = 1.0 / 20.0;
};

/// Constant-velocity filter over [cx, cy, w, h, vx, vy, vw, vh].
class KalmanBoxFilter {
 public:
  KalmanBoxFilter() = default;
  explicit KalmanBoxFilter(const BoundingBox& box, const KalmanNoise& noise = {});

  void predict();
  /// Joseph-form update with the box as measurement; the covariance is re-symmetrised.
  void update(const BoundingBox& box);

  const StateVector& mean() const noexcept { return x_; }
  const StateMatrix& covariance() const noexcept { return p_; }
  /// Box of the current mean; width and height are clamped to at least 1 px.
  BoundingBox box() const;

 private:
  KalmanNoise noise_;
  StateVector x_ = StateVector::Zero();
  StateMatrix p_ = StateMatrix::Identity();
};

}  // namespace mpt::trackers
