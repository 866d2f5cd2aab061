#include "domainscope/scene.hpp"

#include <cmath>
#include <stdexcept>

#include "domainscope/vision_ops.hpp"

namespace domainscope {

namespace {

// Pixel-center rasterization: pixel (x, y) is covered when its center lies
// inside the half-open box extent.
bool covers_pixel(const BoundingBox& b, int x, int y) {
  const double cx = x + 0.5, cy = y + 0.5;
  return cx >= b.x && cx < b.x + b.w && cy >= b.y && cy < b.y + b.h;
}

}  // namespace

LayoutMetrics compute_layout(const std::vector<BoundingBox>& boxes, double image_area) {
  if (!(image_area > 0.0)) throw std::invalid_argument("compute_layout: image_area must be > 0");
  LayoutMetrics m;
  m.object_count = static_cast<int>(boxes.size());

  if (!boxes.empty()) {
    // Union coverage over the pixel-center grid of the box hull; counts
    // double-covered pixels once.
    double min_x = boxes[0].x, min_y = boxes[0].y;
    double max_x = boxes[0].x + boxes[0].w, max_y = boxes[0].y + boxes[0].h;
    for (const auto& b : boxes) {
      min_x = std::min(min_x, b.x);
      min_y = std::min(min_y, b.y);
      max_x = std::max(max_x, b.x + b.w);
      max_y = std::max(max_y, b.y + b.h);
    }
    const int x0 = static_cast<int>(std::floor(min_x));
    const int y0 = static_cast<int>(std::floor(min_y));
    const int x1 = static_cast<int>(std::ceil(max_x));
    const int y1 = static_cast<int>(std::ceil(max_y));
    std::uint64_t covered = 0;
    for (int y = y0; y < y1; ++y) {
      for (int x = x0; x < x1; ++x) {
        for (const auto& b : boxes) {
          if (covers_pixel(b, x, y)) {
            ++covered;
            break;
          }
        }
      }
    }
    m.coverage = static_cast<double>(covered) / image_area;
  }

  double total_area = 0.0;
  for (const auto& b : boxes) total_area += b.area();
  if (boxes.size() > 1 && total_area > 0.0) {
    double inter = 0.0;
    for (std::size_t i = 0; i < boxes.size(); ++i) {
      for (std::size_t j = i + 1; j < boxes.size(); ++j) {
        inter += intersection_area(boxes[i], boxes[j]);
      }
    }
    m.overlap = inter / total_area;
  }
  return m;
}

LayoutClass classify_layout(const LayoutMetrics& m, const CalibrationProfile& profile) {
  if (m.object_count >= profile.layout_crowded_count ||
      m.coverage > profile.layout_crowded_coverage ||
      m.overlap > profile.layout_crowded_overlap) {
    return LayoutClass::crowded;
  }
  if (m.object_count <= profile.layout_sparse_count &&
      m.coverage < profile.layout_sparse_coverage &&
      m.overlap < profile.layout_sparse_overlap) {
    return LayoutClass::sparse;
  }
  return LayoutClass::moderate;
}

std::optional<ScaleMetrics> compute_scale(const std::vector<BoundingBox>& boxes,
                                          double image_area) {
  if (!(image_area > 0.0)) throw std::invalid_argument("compute_scale: image_area must be > 0");
  if (boxes.empty()) return std::nullopt;
  ScaleMetrics m;
  // Cutoffs are fixed at the framework values here; classification reads
  // the profile so a recalibrated profile shifts the label bands.
  std::size_t small = 0, large = 0;
  double sum = 0.0;
  for (const auto& b : boxes) {
    const double a = b.area() / image_area;
    sum += a;
    if (a < 0.005) ++small;
    if (a > 0.025) ++large;
  }
  m.mean_norm_area = sum / static_cast<double>(boxes.size());
  m.small_ratio = static_cast<double>(small) / static_cast<double>(boxes.size());
  m.large_ratio = static_cast<double>(large) / static_cast<double>(boxes.size());
  return m;
}

ScaleClass classify_scale(const ScaleMetrics& m, const CalibrationProfile& profile) {
  const bool small_rule =
      m.small_ratio >= profile.scale_ratio || m.mean_norm_area < profile.scale_small_area;
  const bool large_rule =
      m.large_ratio >= profile.scale_ratio || m.mean_norm_area > profile.scale_large_area;
  if (small_rule && large_rule) {
    if (m.small_ratio > m.large_ratio) return ScaleClass::small;
    if (m.large_ratio > m.small_ratio) return ScaleClass::large;
    return ScaleClass::medium;
  }
  if (small_rule) return ScaleClass::small;
  if (large_rule) return ScaleClass::large;
  return ScaleClass::medium;
}

PixelMask background_mask(const std::vector<BoundingBox>& boxes, int width, int height) {
  PixelMask mask(width, height, true);
  for (const auto& b : boxes) {
    const int x0 = std::max(0, static_cast<int>(std::floor(b.x)));
    const int y0 = std::max(0, static_cast<int>(std::floor(b.y)));
    const int x1 = std::min(width, static_cast<int>(std::ceil(b.x + b.w)));
    const int y1 = std::min(height, static_cast<int>(std::ceil(b.y + b.h)));
    for (int y = y0; y < y1; ++y) {
      for (int x = x0; x < x1; ++x) {
        if (covers_pixel(b, x, y)) mask.set(x, y, false);
      }
    }
  }
  return mask;
}

std::optional<BackgroundMetrics> compute_background(const GrayImage& img, const PixelMask& mask,
                                                    const CalibrationProfile& profile) {
  if (mask.width != img.width || mask.height != img.height) {
    throw std::invalid_argument("compute_background: mask dimensions do not match image");
  }
  const std::size_t bg_pixels = mask.count();
  const std::size_t total = img.size();
  if (bg_pixels * 100 < total) return std::nullopt;  // background under 1%

  BackgroundMetrics m;

  const auto keypoints = fast_keypoints(img, profile.fast_threshold);
  std::size_t kp_in_bg = 0;
  for (const auto& kp : keypoints) {
    if (mask.at(kp.x, kp.y)) ++kp_in_bg;
  }
  const double bg_megapixels = static_cast<double>(bg_pixels) / 1e6;
  m.keypoint_density = static_cast<double>(kp_in_bg) / bg_megapixels;

  const PixelMask edges = canny_edges(img, profile.canny_low, profile.canny_high,
                                      profile.canny_sigma);
  std::size_t edge_in_bg = 0;
  for (std::size_t i = 0; i < edges.bits.size(); ++i) {
    if (edges.bits[i] && mask.bits[i]) ++edge_in_bg;
  }
  m.edge_density = static_cast<double>(edge_in_bg) / static_cast<double>(bg_pixels);

  const std::vector<double> lap = laplacian(img);
  double lap_sum = 0.0;
  for (std::size_t i = 0; i < lap.size(); ++i) {
    if (mask.bits[i]) lap_sum += std::abs(lap[i]);
  }
  m.laplacian_mean = lap_sum / static_cast<double>(bg_pixels);

  m.keypoint_density_n = apply_normalization(m.keypoint_density, profile.entry("bg_keypoint_density"));
  m.edge_density_n = apply_normalization(m.edge_density, profile.entry("bg_edge_density"));
  m.laplacian_mean_n = apply_normalization(m.laplacian_mean, profile.entry("bg_laplacian_mean"));

  const auto& w = profile.background_weights;
  m.score = w[0] * m.keypoint_density_n + w[1] * m.edge_density_n + w[2] * m.laplacian_mean_n;
  return m;
}

BackgroundClass classify_background(double score, const CalibrationProfile& profile) {
  if (score < profile.background_simple) return BackgroundClass::simple;
  if (score > profile.background_complex) return BackgroundClass::complex_;
  return BackgroundClass::textured;
}

}  // namespace domainscope
