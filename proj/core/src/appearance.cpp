#include "domainscope/appearance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "domainscope/vision_ops.hpp"

namespace domainscope {

VisibilityMetrics compute_visibility(const GrayImage& img, const CalibrationProfile& profile) {
  if (img.empty()) throw std::invalid_argument("compute_visibility: empty image");
  VisibilityMetrics m;

  const GradientField g = sobel_gradients(img);
  double acc = 0.0;
  for (std::size_t i = 0; i < img.size(); ++i) acc += g.gx[i] * g.gx[i] + g.gy[i] * g.gy[i];
  m.tenengrad = acc / static_cast<double>(img.size());

  const std::vector<double> lap = laplacian(img);
  double lap_mean = 0.0;
  for (double v : lap) lap_mean += v;
  lap_mean /= static_cast<double>(lap.size());
  double lap_var = 0.0;
  for (double v : lap) lap_var += (v - lap_mean) * (v - lap_mean);
  m.laplacian_var = lap_var / static_cast<double>(lap.size());

  double lum_mean = 0.0;
  for (double v : img.data) lum_mean += v;
  lum_mean /= static_cast<double>(img.size());
  double lum_var = 0.0;
  for (double v : img.data) lum_var += (v - lum_mean) * (v - lum_mean);
  m.rms_contrast = std::sqrt(lum_var / static_cast<double>(img.size())) / 255.0;

  m.freq_energy = highfreq_energy_ratio(img, profile.freq_cutoff);

  m.tenengrad_n = apply_normalization(m.tenengrad, profile.entry("tenengrad"));
  m.laplacian_var_n = apply_normalization(m.laplacian_var, profile.entry("laplacian_var"));
  m.rms_contrast_n = apply_normalization(m.rms_contrast, profile.entry("rms_contrast"));
  m.freq_energy_n = apply_normalization(m.freq_energy, profile.entry("freq_energy"));

  const auto& w = profile.visibility_weights;
  m.score = w[0] * m.tenengrad_n + w[1] * m.laplacian_var_n + w[2] * m.rms_contrast_n +
            w[3] * m.freq_energy_n;
  return m;
}

Visibility classify_visibility(double score, const CalibrationProfile& profile) {
  if (score < profile.visibility_low) return Visibility::low;
  if (score > profile.visibility_high) return Visibility::high;
  return Visibility::moderate;
}

IlluminationMetrics compute_illumination(const GrayImage& img, const CalibrationProfile& profile) {
  if (img.empty()) throw std::invalid_argument("compute_illumination: empty image");
  IlluminationMetrics m;

  // Lower median: the element at index ceil(n/2) - 1 of the sorted values.
  std::vector<double> sorted = img.data;
  const std::size_t rank = (sorted.size() + 1) / 2 - 1;
  std::nth_element(sorted.begin(), sorted.begin() + rank, sorted.end());
  m.median_luminance = sorted[rank];

  std::size_t over = 0, under = 0;
  for (double v : img.data) {
    if (v > profile.luminance_over) ++over;
    if (v < profile.luminance_under) ++under;
  }
  m.overexposed_ratio = static_cast<double>(over) / static_cast<double>(img.size());
  m.underexposed_ratio = static_cast<double>(under) / static_cast<double>(img.size());
  return m;
}

Illumination classify_illumination(const IlluminationMetrics& m,
                                   const CalibrationProfile& profile) {
  if (m.median_luminance < profile.illum_dark) return Illumination::dark;
  if (m.median_luminance > profile.illum_bright) return Illumination::bright;
  // Extreme-exposure override, applied only inside the medium band.
  if (m.underexposed_ratio > profile.extreme_under) return Illumination::dark;
  if (m.overexposed_ratio > profile.extreme_over) return Illumination::bright;
  return Illumination::medium;
}

ColorMetrics compute_color(const RasterImage& img) {
  if (img.channels != 3) {
    throw std::invalid_argument("compute_color: expected 3-channel image");
  }
  if (img.empty()) throw std::invalid_argument("compute_color: empty image");
  ColorMetrics m;
  double r = 0.0, g = 0.0, b = 0.0;
  const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
  const std::uint8_t* p = img.data.data();
  for (std::size_t i = 0; i < n; ++i, p += 3) {
    r += p[0];
    g += p[1];
    b += p[2];
  }
  m.mean_r = r / (255.0 * static_cast<double>(n));
  m.mean_g = g / (255.0 * static_cast<double>(n));
  m.mean_b = b / (255.0 * static_cast<double>(n));
  const double rg = m.mean_r - m.mean_g;
  const double rb = m.mean_r - m.mean_b;
  const double gb = m.mean_g - m.mean_b;
  m.distortion = std::sqrt(rg * rg + rb * rb + gb * gb);
  if (m.mean_g > 0.0) {
    m.blue_green_ratio = m.mean_b / m.mean_g;
  } else {
    m.blue_green_ratio = m.mean_b > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
  }
  return m;
}

ColorCast classify_color(const ColorMetrics& m, const CalibrationProfile& profile) {
  if (m.distortion > profile.color_distortion) {
    if (m.blue_green_ratio > profile.bgr_blue_min) return ColorCast::blue;
    if (m.blue_green_ratio < profile.bgr_green_max) return ColorCast::green;
  }
  return ColorCast::natural;
}

}  // namespace domainscope
