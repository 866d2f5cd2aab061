#ifndef DOMAINSCOPE_APPEARANCE_HPP
#define DOMAINSCOPE_APPEARANCE_HPP

#include "domainscope/calibration.hpp"
#include "domainscope/image.hpp"
#include "domainscope/labels.hpp"

namespace domainscope {

struct VisibilityMetrics {
  double tenengrad = 0.0;      // mean squared Sobel gradient magnitude
  double laplacian_var = 0.0;  // variance of the Laplacian response
  double rms_contrast = 0.0;   // std of luminance / 255
  double freq_energy = 0.0;    // high-frequency spectral energy ratio
  double tenengrad_n = 0.0;    // normalized components
  double laplacian_var_n = 0.0;
  double rms_contrast_n = 0.0;
  double freq_energy_n = 0.0;
  double score = 0.0;  // 0.35 T + 0.30 V + 0.20 R + 0.15 F on normalized values

  bool operator==(const VisibilityMetrics&) const = default;
};

struct IlluminationMetrics {
  double median_luminance = 0.0;   // lower median over all pixels
  double overexposed_ratio = 0.0;  // fraction of pixels > L_over
  double underexposed_ratio = 0.0; // fraction of pixels < L_under

  bool operator==(const IlluminationMetrics&) const = default;
};

struct ColorMetrics {
  double mean_r = 0.0;  // channel means on [0, 1]
  double mean_g = 0.0;
  double mean_b = 0.0;
  double distortion = 0.0;        // sqrt of summed pairwise squared differences
  double blue_green_ratio = 1.0;  // mu_B / mu_G; +inf sentinel when mu_G = 0 < mu_B

  bool operator==(const ColorMetrics&) const = default;
};

/// Raw sharpness/contrast/frequency statistics, each normalized per the
/// profile, combined into the weighted visibility score.
VisibilityMetrics compute_visibility(const GrayImage& img, const CalibrationProfile& profile);

Visibility classify_visibility(double score, const CalibrationProfile& profile);

IlluminationMetrics compute_illumination(const GrayImage& img, const CalibrationProfile& profile);

/// Median rule first; the exposure-ratio override applies only inside the
/// medium band.
Illumination classify_illumination(const IlluminationMetrics& m, const CalibrationProfile& profile);

ColorMetrics compute_color(const RasterImage& img);

ColorCast classify_color(const ColorMetrics& m, const CalibrationProfile& profile);

}  // namespace domainscope

#endif  // DOMAINSCOPE_APPEARANCE_HPP
