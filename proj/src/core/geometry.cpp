#include "mpt/core/geometry.hpp"

#include <algorithm>
#include <string>

#include "mpt/core/error.hpp"

namespace mpt {

BoundingBox::BoundingBox(double x, double y, double w, double h) : x_(x), y_(y), w_(w), h_(h) {
  if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(w) || !std::isfinite(h)) {
    throw ValidationError("bounding box has non-finite coordinates");
  }
  if (!(w > 0.0) || !(h > 0.0)) {
    throw ValidationError("bounding box needs w > 0 and h > 0, got w=" + std::to_string(w) +
                          " h=" + std::to_string(h));
  }
}

BoundingBox BoundingBox::from_corners(double x1, double y1, double x2, double y2) {
  return {x1, y1, x2 - x1, y2 - y1};
}

BoundingBox BoundingBox::from_center(double cx, double cy, double w, double h) {
  return {cx - 0.5 * w, cy - 0.5 * h, w, h};
}

double intersection_area(const BoundingBox& a, const BoundingBox& b) noexcept {
  const double iw = std::min(a.right(), b.right()) - std::max(a.x(), b.x());
  const double ih = std::min(a.bottom(), b.bottom()) - std::max(a.y(), b.y());
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  return iw * ih;
}

double iou(const BoundingBox& a, const BoundingBox& b) noexcept {
  // Corner arithmetic loses the last ulp, so identical boxes are special-cased.
  if (a == b) return 1.0;
  const double inter = intersection_area(a, b);
  if (inter <= 0.0) return 0.0;
  const double uni = a.area() + b.area() - inter;
  return std::clamp(inter / uni, 0.0, 1.0);
}

}  // namespace mpt
