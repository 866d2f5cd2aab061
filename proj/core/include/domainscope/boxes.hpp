#ifndef DOMAINSCOPE_BOXES_HPP
#define DOMAINSCOPE_BOXES_HPP

#include <algorithm>
#include <cstdint>

namespace domainscope {

/// Axis-aligned box in pixel units, COCO convention: top-left corner + extent.
struct BoundingBox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;
  std::int64_t category_id = 0;

  double area() const { return w * h; }
};

inline double intersection_area(const BoundingBox& a, const BoundingBox& b) {
  const double ix = std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x);
  const double iy = std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y);
  if (ix <= 0.0 || iy <= 0.0) return 0.0;
  return ix * iy;
}

/// Intersection over union of two positive-area boxes.
inline double iou(const BoundingBox& a, const BoundingBox& b) {
  const double inter = intersection_area(a, b);
  const double uni = a.area() + b.area() - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

/// Clamp a box into [0,w]x[0,h]. The result may have zero extent.
inline BoundingBox clamp_box(const BoundingBox& b, double img_w, double img_h) {
  BoundingBox r = b;
  const double x0 = std::clamp(b.x, 0.0, img_w);
  const double y0 = std::clamp(b.y, 0.0, img_h);
  const double x1 = std::clamp(b.x + b.w, 0.0, img_w);
  const double y1 = std::clamp(b.y + b.h, 0.0, img_h);
  r.x = x0;
  r.y = y0;
  r.w = std::max(0.0, x1 - x0);
  r.h = std::max(0.0, y1 - y0);
  return r;
}

}  // namespace domainscope

#endif  // DOMAINSCOPE_BOXES_HPP
