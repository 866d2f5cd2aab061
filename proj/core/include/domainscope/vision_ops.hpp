#ifndef DOMAINSCOPE_VISION_OPS_HPP
#define DOMAINSCOPE_VISION_OPS_HPP

#include <complex>
#include <vector>

#include "domainscope/image.hpp"

namespace domainscope {

/// Standard luma weighting 0.299 R + 0.587 G + 0.114 B.
/// Throws std::invalid_argument when the image is not 3-channel 8-bit.
GrayImage to_grayscale(const RasterImage& img);

/// 3x3 Sobel with edge-replicate padding. gx kernel
/// [[-1,0,1],[-2,0,2],[-1,0,1]], gy its transpose.
/// Requires width >= 3 and height >= 3.
GradientField sobel_gradients(const GrayImage& img);

/// 3x3 Laplacian [[0,1,0],[1,-4,1],[0,1,0]], edge-replicate padding.
/// Requires width >= 3 and height >= 3.
std::vector<double> laplacian(const GrayImage& img);

/// 5x5 Gaussian smoothing with edge-replicate padding; kernel normalized
/// to unit sum.
GrayImage gaussian_blur_5x5(const GrayImage& img, double sigma);

/// Smoothed gradient magnitudes, the stage of Canny before non-maximum
/// suppression: Gaussian 5x5 blur followed by Sobel. Exposed so the
/// pre-hysteresis pipeline can be checked in isolation.
GrayImage canny_gradient_magnitude(const GrayImage& img, double sigma = 1.4);

/// Canny edges: Gaussian 5x5 (sigma) -> Sobel -> non-maximum suppression
/// along the quantized gradient direction -> double-threshold hysteresis
/// (8-connected). Thresholds are on the [0,255] gradient-magnitude scale.
/// Requires 0 < low_thresh < high_thresh.
PixelMask canny_edges(const GrayImage& img, double low_thresh, double high_thresh,
                      double sigma = 1.4);

struct FastKeypoint {
  int x = 0;
  int y = 0;
  double score = 0.0;
};

/// FAST-9 segment test on the 16-pixel Bresenham circle of radius 3: a
/// pixel is a corner when >= 9 contiguous circle pixels are all brighter
/// than center + thresh or all darker than center - thresh. Followed by
/// non-maximum suppression of the FAST score over 3x3 neighborhoods;
/// score ties break toward the earlier raster-order pixel.
/// Requires width >= 7 and height >= 7.
std::vector<FastKeypoint> fast_keypoints(const GrayImage& img, double intensity_thresh);

/// 2-D DFT of a real image, arbitrary dimensions (mixed-radix Cooley-Tukey
/// with a naive fallback at prime sizes). Row-major output, X[v*W + u].
std::vector<std::complex<double>> dft_2d(const GrayImage& img);

/// High-frequency spectral energy ratio of the mean-subtracted image.
/// A bin (u, v) counts as high frequency when its radial coordinate
/// sqrt(fu^2 + fv^2) >= cutoff, where fu = 2*min(u, W-u)/W and
/// fv = 2*min(v, H-v)/H (1.0 = Nyquist along an axis). Returns
/// high-frequency energy / total energy excluding the DC bin, or 0 for a
/// constant image. Requires 0 < cutoff < 1 and a non-empty image.
double highfreq_energy_ratio(const GrayImage& img, double cutoff);

}  // namespace domainscope

#endif  // DOMAINSCOPE_VISION_OPS_HPP
