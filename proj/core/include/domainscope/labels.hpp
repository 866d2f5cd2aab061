#ifndef DOMAINSCOPE_LABELS_HPP
#define DOMAINSCOPE_LABELS_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace domainscope {

enum class Visibility { low, moderate, high };
enum class Illumination { dark, medium, bright };
enum class ColorCast { blue, natural, green };
enum class LayoutClass { sparse, moderate, crowded };
enum class ScaleClass { small, medium, large };
enum class BackgroundClass { simple, textured, complex_ };
enum class Orientation { upright, slightly_tilted, rotated };
enum class Perspective { nadir, oblique, front };

/// The eight framework categories, in the fixed reporting order.
enum class DomainCategory {
  visibility,
  illumination,
  color,
  layout,
  scale,
  background,
  orientation,
  perspective
};

inline constexpr std::array<DomainCategory, 8> kAllCategories = {
    DomainCategory::visibility, DomainCategory::illumination, DomainCategory::color,
    DomainCategory::layout,     DomainCategory::scale,        DomainCategory::background,
    DomainCategory::orientation, DomainCategory::perspective};

std::string_view to_string(Visibility v);
std::string_view to_string(Illumination v);
std::string_view to_string(ColorCast v);
std::string_view to_string(LayoutClass v);
std::string_view to_string(ScaleClass v);
std::string_view to_string(BackgroundClass v);
std::string_view to_string(Orientation v);
std::string_view to_string(Perspective v);
std::string_view to_string(DomainCategory c);

template <typename E>
E enum_from_string(std::string_view s);

/// The three labels of one category in band order (low / middle / high).
const std::vector<std::string>& category_labels(DomainCategory c);

/// Category value or an exclusion reason ("no_objects", "no_depth", ...).
template <typename E>
struct Assignment {
  std::optional<E> label;
  std::string unlabeled_reason;  // non-empty iff !label

  static Assignment labeled(E v) { return {v, {}}; }
  static Assignment unlabeled(std::string reason) { return {std::nullopt, std::move(reason)}; }

  bool is_labeled() const { return label.has_value(); }
  std::string text() const {
    return label ? std::string(to_string(*label)) : "unlabeled(" + unlabeled_reason + ")";
  }
  bool operator==(const Assignment&) const = default;
};

// Exclusion reasons used by the pipeline.
inline constexpr std::string_view kReasonNoObjects = "no_objects";
inline constexpr std::string_view kReasonNoDepth = "no_depth";
inline constexpr std::string_view kReasonBackgroundTooSmall = "background_too_small";
inline constexpr std::string_view kReasonRegionUnderpopulated = "region_underpopulated";

}  // namespace domainscope

#endif  // DOMAINSCOPE_LABELS_HPP
