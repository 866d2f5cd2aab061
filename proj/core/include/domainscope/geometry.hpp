#ifndef DOMAINSCOPE_GEOMETRY_HPP
#define DOMAINSCOPE_GEOMETRY_HPP

#include <optional>

#include "domainscope/calibration.hpp"
#include "domainscope/image.hpp"
#include "domainscope/labels.hpp"

namespace domainscope {

struct GeometryMetrics {
  double delta_lr = 0.0;     // |mean left depth - mean right depth|, background only
  double delta_tb = 0.0;     // |mean top depth - mean bottom depth|, background only
  double depth_range = 0.0;  // spread of valid background depths (p2/p98-trimmed)
  double brightness_gradient = 0.0;  // mean top luminance - mean bottom, all pixels, signed

  bool operator==(const GeometryMetrics&) const = default;
};

/// Depth statistics over background pixels split at the profile's
/// horizontal/vertical fractions; the brightness gradient is a whole-image
/// scene-light cue. nullopt when any half-region holds fewer than
/// profile.min_region_pixels valid background depths.
std::optional<GeometryMetrics> compute_geometry(const DepthMap& depth, const GrayImage& img,
                                                const PixelMask& bg_mask,
                                                const CalibrationProfile& profile);

Orientation classify_orientation(const GeometryMetrics& m, const CalibrationProfile& profile);

/// Front disjunction (including the signed brightness fallback) evaluated
/// first, then the nadir conjunction, else oblique.
Perspective classify_perspective(const GeometryMetrics& m, const CalibrationProfile& profile);

}  // namespace domainscope

#endif  // DOMAINSCOPE_GEOMETRY_HPP
