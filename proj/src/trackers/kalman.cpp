#include "mpt/trackers/kalman.hpp"

#include <algorithm>

#include <Eigen/Cholesky>

namespace mpt::trackers {

namespace {

StateMatrix transition() {
  StateMatrix f = StateMatrix::Identity();
  for (int i = 0; i < 4; ++i) f(i, i + 4) = 1.0;
  return f;
}

Eigen::Matrix<double, 4, 8> observation() {
  Eigen::Matrix<double, 4, 8> h = Eigen::Matrix<double, 4, 8>::Zero();
  for (int i = 0; i < 4; ++i) h(i, i) = 1.0;
  return h;
}

// Sizes used to scale noise; a degenerate predicted size must not zero the noise.
double positive(double v) { return std::max(v, 1.0); }

}  // namespace

KalmanBoxFilter::KalmanBoxFilter(const BoundingBox& box, const KalmanNoise& noise) : noise_(noise) {
  const Point2 c = box.center();
  x_ << c.x, c.y, box.w(), box.h(), 0, 0, 0, 0;
  const double w = box.w();
  const double h = box.h();
  StateVector sd;
  sd << 2 * noise_.position * w, 2 * noise_.position * h, 2 * noise_.position * w, 2 * noise_.position * h,
      10 * noise_.velocity * w, 10 * noise_.velocity * h, 10 * noise_.velocity * w, 10 * noise_.velocity * h;
  p_ = sd.array().square().matrix().asDiagonal();
}

void KalmanBoxFilter::predict() {
  static const StateMatrix F = transition();
  const double w = positive(x_(2));
  const double h = positive(x_(3));
  StateVector sd;
  sd << noise_.position * w, noise_.position * h, noise_.position * w, noise_.position * h, noise_.velocity * w,
      noise_.velocity * h, noise_.velocity * w, noise_.velocity * h;
  const StateMatrix q = sd.array().square().matrix().asDiagonal();
  x_ = F * x_;
  p_ = F * p_ * F.transpose() + q;
  p_ = 0.5 * (p_ + p_.transpose()).eval();
}

void KalmanBoxFilter::update(const BoundingBox& box) {
  static const Eigen::Matrix<double, 4, 8> H = observation();
  const double w = positive(x_(2));
  const double h = positive(x_(3));
  Eigen::Vector4d sd(noise_.measurement * w, noise_.measurement * h, noise_.measurement * w, noise_.measurement * h);
  const Eigen::Matrix4d r = sd.array().square().matrix().asDiagonal();
  const Point2 c = box.center();
  const Eigen::Vector4d z(c.x, c.y, box.w(), box.h());

  const Eigen::Matrix4d s = H * p_ * H.transpose() + r;
  // K = P H^T S^-1, via an LDLT solve of S K^T = H P.
  const Eigen::Matrix<double, 8, 4> k = s.ldlt().solve(H * p_).transpose();
  x_ += k * (z - H * x_);
  const StateMatrix ikh = StateMatrix::Identity() - k * H;
  p_ = ikh * p_ * ikh.transpose() + k * r * k.transpose();
  p_ = 0.5 * (p_ + p_.transpose()).eval();
}

BoundingBox KalmanBoxFilter::box() const {
  return BoundingBox::from_center(x_(0), x_(1), std::max(1.0, x_(2)), std::max(1.0, x_(3)));
}

}  // namespace mpt::trackers
