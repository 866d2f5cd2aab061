#ifndef DOMAINSCOPE_RECORD_HPP
#define DOMAINSCOPE_RECORD_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "domainscope/appearance.hpp"
#include "domainscope/geometry.hpp"
#include "domainscope/labels.hpp"
#include "domainscope/scene.hpp"

namespace domainscope {

/// Raw + normalized metric values behind one image's assignments. Optional
/// blocks are absent when the corresponding category was not computable.
struct MetricVector {
  VisibilityMetrics visibility;
  IlluminationMetrics illumination;
  ColorMetrics color;
  LayoutMetrics layout;
  std::optional<ScaleMetrics> scale;
  std::optional<BackgroundMetrics> background;
  std::optional<GeometryMetrics> geometry;

  bool operator==(const MetricVector&) const = default;
};

/// The per-image labeling result: the eight categorical assignments plus
/// the metric vector that produced them.
struct DomainLabelRecord {
  std::int64_t image_id = 0;
  Assignment<Visibility> visibility;
  Assignment<Illumination> illumination;
  Assignment<ColorCast> color;
  Assignment<LayoutClass> layout;
  Assignment<ScaleClass> scale;
  Assignment<BackgroundClass> background;
  Assignment<Orientation> orientation;
  Assignment<Perspective> perspective;
  MetricVector metrics;
  std::string profile_id;

  /// Label text for one category ("low", "unlabeled(no_depth)", ...).
  std::string label_text(DomainCategory c) const;
  bool is_labeled(DomainCategory c) const;

  bool operator==(const DomainLabelRecord&) const = default;
};

}  // namespace domainscope

#endif  // DOMAINSCOPE_RECORD_HPP
