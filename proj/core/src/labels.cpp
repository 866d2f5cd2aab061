#include "domainscope/labels.hpp"

namespace domainscope {

std::string_view to_string(Visibility v) {
  switch (v) {
    case Visibility::low: return "low";
    case Visibility::moderate: return "moderate";
    case Visibility::high: return "high";
  }
  return "?";
}

std::string_view to_string(Illumination v) {
  switch (v) {
    case Illumination::dark: return "dark";
    case Illumination::medium: return "medium";
    case Illumination::bright: return "bright";
  }
  return "?";
}

std::string_view to_string(ColorCast v) {
  switch (v) {
    case ColorCast::blue: return "blue";
    case ColorCast::natural: return "natural";
    case ColorCast::green: return "green";
  }
  return "?";
}

std::string_view to_string(LayoutClass v) {
  switch (v) {
    case LayoutClass::sparse: return "sparse";
    case LayoutClass::moderate: return "moderate";
    case LayoutClass::crowded: return "crowded";
  }
  return "?";
}

std::string_view to_string(ScaleClass v) {
  switch (v) {
    case ScaleClass::small: return "small";
    case ScaleClass::medium: return "medium";
    case ScaleClass::large: return "large";
  }
  return "?";
}

std::string_view to_string(BackgroundClass v) {
  switch (v) {
    case BackgroundClass::simple: return "simple";
    case BackgroundClass::textured: return "textured";
    case BackgroundClass::complex_: return "complex";
  }
  return "?";
}

std::string_view to_string(Orientation v) {
  switch (v) {
    case Orientation::upright: return "upright";
    case Orientation::slightly_tilted: return "slightly_tilted";
    case Orientation::rotated: return "rotated";
  }
  return "?";
}

std::string_view to_string(Perspective v) {
  switch (v) {
    case Perspective::nadir: return "nadir";
    case Perspective::oblique: return "oblique";
    case Perspective::front: return "front";
  }
  return "?";
}

std::string_view to_string(DomainCategory c) {
  switch (c) {
    case DomainCategory::visibility: return "visibility";
    case DomainCategory::illumination: return "illumination";
    case DomainCategory::color: return "color";
    case DomainCategory::layout: return "layout";
    case DomainCategory::scale: return "scale";
    case DomainCategory::background: return "background";
    case DomainCategory::orientation: return "orientation";
    case DomainCategory::perspective: return "perspective";
  }
  return "?";
}

const std::vector<std::string>& category_labels(DomainCategory c) {
  static const std::array<std::vector<std::string>, 8> tables = {{
      {"low", "moderate", "high"},
      {"dark", "medium", "bright"},
      {"blue", "natural", "green"},
      {"sparse", "moderate", "crowded"},
      {"small", "medium", "large"},
      {"simple", "textured", "complex"},
      {"upright", "slightly_tilted", "rotated"},
      {"nadir", "oblique", "front"},
  }};
  return tables[static_cast<std::size_t>(c)];
}

namespace {

template <typename E, std::size_t N>
E lookup(std::string_view s, const std::array<std::pair<std::string_view, E>, N>& table,
         const char* what) {
  for (const auto& [name, value] : table) {
    if (name == s) return value;
  }
  throw std::invalid_argument(std::string("unknown ") + what + " label: " + std::string(s));
}

}  // namespace

template <>
Visibility enum_from_string<Visibility>(std::string_view s) {
  return lookup<Visibility, 3>(
      s, {{{"low", Visibility::low}, {"moderate", Visibility::moderate}, {"high", Visibility::high}}},
      "visibility");
}

template <>
Illumination enum_from_string<Illumination>(std::string_view s) {
  return lookup<Illumination, 3>(s,
                                 {{{"dark", Illumination::dark},
                                   {"medium", Illumination::medium},
                                   {"bright", Illumination::bright}}},
                                 "illumination");
}

template <>
ColorCast enum_from_string<ColorCast>(std::string_view s) {
  return lookup<ColorCast, 3>(
      s, {{{"blue", ColorCast::blue}, {"natural", ColorCast::natural}, {"green", ColorCast::green}}},
      "color");
}

template <>
LayoutClass enum_from_string<LayoutClass>(std::string_view s) {
  return lookup<LayoutClass, 3>(s,
                                {{{"sparse", LayoutClass::sparse},
                                  {"moderate", LayoutClass::moderate},
                                  {"crowded", LayoutClass::crowded}}},
                                "layout");
}

template <>
ScaleClass enum_from_string<ScaleClass>(std::string_view s) {
  return lookup<ScaleClass, 3>(
      s, {{{"small", ScaleClass::small}, {"medium", ScaleClass::medium}, {"large", ScaleClass::large}}},
      "scale");
}

template <>
BackgroundClass enum_from_string<BackgroundClass>(std::string_view s) {
  return lookup<BackgroundClass, 3>(s,
                                    {{{"simple", BackgroundClass::simple},
                                      {"textured", BackgroundClass::textured},
                                      {"complex", BackgroundClass::complex_}}},
                                    "background");
}

template <>
Orientation enum_from_string<Orientation>(std::string_view s) {
  return lookup<Orientation, 3>(s,
                                {{{"upright", Orientation::upright},
                                  {"slightly_tilted", Orientation::slightly_tilted},
                                  {"rotated", Orientation::rotated}}},
                                "orientation");
}

template <>
Perspective enum_from_string<Perspective>(std::string_view s) {
  return lookup<Perspective, 3>(
      s,
      {{{"nadir", Perspective::nadir}, {"oblique", Perspective::oblique}, {"front", Perspective::front}}},
      "perspective");
}

template <>
DomainCategory enum_from_string<DomainCategory>(std::string_view s) {
  return lookup<DomainCategory, 8>(s,
                                   {{{"visibility", DomainCategory::visibility},
                                     {"illumination", DomainCategory::illumination},
                                     {"color", DomainCategory::color},
                                     {"layout", DomainCategory::layout},
                                     {"scale", DomainCategory::scale},
                                     {"background", DomainCategory::background},
                                     {"orientation", DomainCategory::orientation},
                                     {"perspective", DomainCategory::perspective}}},
                                   "category");
}

}  // namespace domainscope
