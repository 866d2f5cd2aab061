#include "domainscope/record.hpp"

#include <stdexcept>

namespace domainscope {

std::string DomainLabelRecord::label_text(DomainCategory category) const {
  switch (category) {
    case DomainCategory::visibility: return visibility.text();
    case DomainCategory::illumination: return illumination.text();
    case DomainCategory::color: return color.text();
    case DomainCategory::layout: return layout.text();
    case DomainCategory::scale: return scale.text();
    case DomainCategory::background: return background.text();
    case DomainCategory::orientation: return orientation.text();
    case DomainCategory::perspective: return perspective.text();
  }
  throw std::logic_error("label_text: unknown category");
}

bool DomainLabelRecord::is_labeled(DomainCategory category) const {
  switch (category) {
    case DomainCategory::visibility: return visibility.is_labeled();
    case DomainCategory::illumination: return illumination.is_labeled();
    case DomainCategory::color: return color.is_labeled();
    case DomainCategory::layout: return layout.is_labeled();
    case DomainCategory::scale: return scale.is_labeled();
    case DomainCategory::background: return background.is_labeled();
    case DomainCategory::orientation: return orientation.is_labeled();
    case DomainCategory::perspective: return perspective.is_labeled();
  }
  throw std::logic_error("is_labeled: unknown category");
}

}  // namespace domainscope
