#ifndef DOMAINSCOPE_SCENE_HPP
#define DOMAINSCOPE_SCENE_HPP

#include <optional>
#include <vector>

#include "domainscope/boxes.hpp"
#include "domainscope/calibration.hpp"
#include "domainscope/image.hpp"
#include "domainscope/labels.hpp"

namespace domainscope {

struct LayoutMetrics {
  int object_count = 0;
  double coverage = 0.0;  // rasterized union of boxes / image pixels
  double overlap = 0.0;   // pairwise intersection area / total box area

  bool operator==(const LayoutMetrics&) const = default;
};

struct ScaleMetrics {
  double mean_norm_area = 0.0;  // mean of per-object area / image area
  double small_ratio = 0.0;     // fraction with normalized area < small cutoff
  double large_ratio = 0.0;     // fraction with normalized area > large cutoff

  bool operator==(const ScaleMetrics&) const = default;
};

struct BackgroundMetrics {
  double keypoint_density = 0.0;  // FAST keypoints per background megapixel
  double edge_density = 0.0;      // edge pixels / background pixels
  double laplacian_mean = 0.0;    // mean |Laplacian| over background pixels
  double keypoint_density_n = 0.0;
  double edge_density_n = 0.0;
  double laplacian_mean_n = 0.0;
  double score = 0.0;  // 0.45 K + 0.35 E + 0.20 M on normalized values

  bool operator==(const BackgroundMetrics&) const = default;
};

/// N, union coverage and pairwise overlap. Coverage rasterizes the union
/// of boxes on the pixel-center grid so double-covered pixels count once.
/// Overlap sums intersections over unordered pairs; 0 when N <= 1 or the
/// total box area is 0.
LayoutMetrics compute_layout(const std::vector<BoundingBox>& boxes, double image_area);

/// Crowded disjunction checked first, then the sparse conjunction (which
/// zero boxes satisfy vacuously), else moderate.
LayoutClass classify_layout(const LayoutMetrics& m, const CalibrationProfile& profile);

/// nullopt when there are no boxes (mean area undefined).
std::optional<ScaleMetrics> compute_scale(const std::vector<BoundingBox>& boxes,
                                          double image_area);

/// Small/large rules per the ratio and mean-area cutoffs; when both fire,
/// the larger ratio wins and a ratio tie falls back to medium.
ScaleClass classify_scale(const ScaleMetrics& m, const CalibrationProfile& profile);

/// True exactly for pixels (by pixel center) not covered by any box.
PixelMask background_mask(const std::vector<BoundingBox>& boxes, int width, int height);

/// Keypoint/edge/Laplacian statistics restricted to the mask, normalized
/// per the profile and combined into the background complexity score.
/// nullopt when the mask covers less than 1% of the image (the caller
/// records the image as excluded from the background category).
std::optional<BackgroundMetrics> compute_background(const GrayImage& img, const PixelMask& mask,
                                                    const CalibrationProfile& profile);

BackgroundClass classify_background(double score, const CalibrationProfile& profile);

}  // namespace domainscope

#endif  // DOMAINSCOPE_SCENE_HPP
