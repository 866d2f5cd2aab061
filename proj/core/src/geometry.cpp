#include "domainscope/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace domainscope {

namespace {

// Nearest-rank percentile on a sorted sample (same convention as the
// calibration accumulator).
double percentile_sorted(const std::vector<double>& sorted, double q) {
  const std::size_t n = sorted.size();
  std::size_t rank = static_cast<std::size_t>(std::ceil(q / 100.0 * static_cast<double>(n)));
  if (rank > 0) --rank;
  return sorted[std::min(rank, n - 1)];
}

}  // namespace

std::optional<GeometryMetrics> compute_geometry(const DepthMap& depth, const GrayImage& img,
                                                const PixelMask& bg_mask,
                                                const CalibrationProfile& profile) {
  if (depth.width != img.width || depth.height != img.height ||
      bg_mask.width != img.width || bg_mask.height != img.height) {
    throw std::invalid_argument("compute_geometry: depth/mask dimensions do not match image");
  }

  const double split_x = profile.split_fraction * img.width;
  const double split_y = profile.split_fraction * img.height;

  // Half-region accumulators over valid background depths. A pixel belongs to
  // the left/top half when its center falls below the split line.
  double sum_l = 0.0, sum_r = 0.0, sum_t = 0.0, sum_b = 0.0;
  std::size_t n_l = 0, n_r = 0, n_t = 0, n_b = 0;
  std::vector<double> bg_depths;
  bg_depths.reserve(static_cast<std::size_t>(img.width) * img.height / 2);

  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      if (!bg_mask.at(x, y) || !depth.is_valid(x, y)) continue;
      const double d = depth.at(x, y);
      bg_depths.push_back(d);
      if (x + 0.5 < split_x) {
        sum_l += d;
        ++n_l;
      } else {
        sum_r += d;
        ++n_r;
      }
      if (y + 0.5 < split_y) {
        sum_t += d;
        ++n_t;
      } else {
        sum_b += d;
        ++n_b;
      }
    }
  }

  const auto min_n = static_cast<std::size_t>(profile.min_region_pixels);
  if (n_l < min_n || n_r < min_n || n_t < min_n || n_b < min_n) return std::nullopt;

  GeometryMetrics m;
  m.delta_lr = std::abs(sum_l / static_cast<double>(n_l) - sum_r / static_cast<double>(n_r));
  m.delta_tb = std::abs(sum_t / static_cast<double>(n_t) - sum_b / static_cast<double>(n_b));

  std::sort(bg_depths.begin(), bg_depths.end());
  if (profile.depth_range_trim) {
    m.depth_range = percentile_sorted(bg_depths, 98.0) - percentile_sorted(bg_depths, 2.0);
  } else {
    m.depth_range = bg_depths.back() - bg_depths.front();
  }

  // Brightness gradient is a scene-light cue, so it is taken over every pixel
  // rather than the background alone. Signed: positive means brighter top.
  double lum_t = 0.0, lum_b = 0.0;
  std::size_t ln_t = 0, ln_b = 0;
  for (int y = 0; y < img.height; ++y) {
    const bool top = y + 0.5 < split_y;
    for (int x = 0; x < img.width; ++x) {
      if (top) {
        lum_t += img.at(x, y);
        ++ln_t;
      } else {
        lum_b += img.at(x, y);
        ++ln_b;
      }
    }
  }
  m.brightness_gradient = (ln_t ? lum_t / static_cast<double>(ln_t) : 0.0) -
                          (ln_b ? lum_b / static_cast<double>(ln_b) : 0.0);
  return m;
}

Orientation classify_orientation(const GeometryMetrics& m, const CalibrationProfile& profile) {
  if (m.delta_lr < profile.orient_upright) return Orientation::upright;
  if (m.delta_lr > profile.orient_rotated) return Orientation::rotated;
  return Orientation::slightly_tilted;
}

Perspective classify_perspective(const GeometryMetrics& m, const CalibrationProfile& profile) {
  // Front is a disjunction and wins over nadir when both fire.
  if (m.delta_tb > profile.persp_front_tb || m.depth_range > profile.persp_front_range ||
      m.brightness_gradient > profile.persp_front_brightness) {
    return Perspective::front;
  }
  if (m.delta_tb < profile.persp_nadir_tb && m.depth_range < profile.persp_nadir_range) {
    return Perspective::nadir;
  }
  return Perspective::oblique;
}

}  // namespace domainscope
