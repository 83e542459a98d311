#pragma once

#include <cmath>
#include <compare>

namespace mpt {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Axis-aligned box in pixel units, (x, y) is the top-left corner.
/// Construction rejects non-positive sizes and non-finite coordinates, so every
/// BoundingBox in the program is valid.
class BoundingBox {
 public:
  BoundingBox(double x, double y, double w, double h);

  /// Box from corner coordinates; throws if x2 <= x1 or y2 <= y1.
  static BoundingBox from_corners(double x1, double y1, double x2, double y2);
  static BoundingBox from_center(double cx, double cy, double w, double h);

  double x() const noexcept { return x_; }
  double y() const noexcept { return y_; }
  double w() const noexcept { return w_; }
  double h() const noexcept { return h_; }
  double right() const noexcept { return x_ + w_; }
  double bottom() const noexcept { return y_ + h_; }
  double area() const noexcept { return w_ * h_; }
  Point2 center() const noexcept { return {x_ + 0.5 * w_, y_ + 0.5 * h_}; }

  BoundingBox translated(double dx, double dy) const { return {x_ + dx, y_ + dy, w_, h_}; }

  bool operator==(const BoundingBox&) const = default;

 private:
  double x_;
  double y_;
  double w_;
  double h_;
};

double intersection_area(const BoundingBox& a, const BoundingBox& b) noexcept;

/// Intersection over union, symmetric, in [0, 1].
double iou(const BoundingBox& a, const BoundingBox& b) noexcept;

/// Round half-up, the rule used whenever real pixel values are written as integers.
inline long long round_half_up(double v) { return static_cast<long long>(std::floor(v + 0.5)); }

}  // namespace mpt
