#include "domainscope/vision_ops.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace domainscope {

namespace {

int clampi(int v, int lo, int hi) { return v < lo ? lo : (v > hi ? hi : v); }

void require_min_size(const GrayImage& img, int min_w, int min_h, const char* op) {
  if (img.width < min_w || img.height < min_h) {
    throw std::invalid_argument(std::string(op) + ": image smaller than " +
                                std::to_string(min_w) + "x" + std::to_string(min_h));
  }
}

}  // namespace

GrayImage to_grayscale(const RasterImage& img) {
  if (img.channels != 3) {
    throw std::invalid_argument("to_grayscale: expected 3-channel image, got " +
                                std::to_string(img.channels));
  }
  GrayImage out(img.width, img.height);
  const std::uint8_t* p = img.data.data();
  for (std::size_t i = 0; i < out.size(); ++i, p += 3) {
    out.data[i] = 0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2];
  }
  return out;
}

GradientField sobel_gradients(const GrayImage& img) {
  require_min_size(img, 3, 3, "sobel_gradients");
  const int w = img.width, h = img.height;
  GradientField g;
  g.width = w;
  g.height = h;
  g.gx.resize(img.size());
  g.gy.resize(img.size());
  for (int y = 0; y < h; ++y) {
    const int ym = clampi(y - 1, 0, h - 1), yp = clampi(y + 1, 0, h - 1);
    for (int x = 0; x < w; ++x) {
      const int xm = clampi(x - 1, 0, w - 1), xp = clampi(x + 1, 0, w - 1);
      const double tl = img.at(xm, ym), tc = img.at(x, ym), tr = img.at(xp, ym);
      const double ml = img.at(xm, y), mr = img.at(xp, y);
      const double bl = img.at(xm, yp), bc = img.at(x, yp), br = img.at(xp, yp);
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      // Terms accumulate in kernel raster order; on non-integer inputs the
      // result is then bit-reproducible by a direct sum-of-products loop.
      double gx = tr - tl;
      gx -= 2.0 * ml;
      gx += 2.0 * mr;
      gx -= bl;
      gx += br;
      double gy = -tl;
      gy -= 2.0 * tc;
      gy -= tr;
      gy += bl;
      gy += 2.0 * bc;
      gy += br;
      g.gx[i] = gx;
      g.gy[i] = gy;
    }
  }
  return g;
}

std::vector<double> laplacian(const GrayImage& img) {
  require_min_size(img, 3, 3, "laplacian");
  const int w = img.width, h = img.height;
  std::vector<double> out(img.size());
  for (int y = 0; y < h; ++y) {
    const int ym = clampi(y - 1, 0, h - 1), yp = clampi(y + 1, 0, h - 1);
    for (int x = 0; x < w; ++x) {
      const int xm = clampi(x - 1, 0, w - 1), xp = clampi(x + 1, 0, w - 1);
      out[static_cast<std::size_t>(y) * w + x] =
          img.at(x, ym) + img.at(x, yp) + img.at(xm, y) + img.at(xp, y) -
          4.0 * img.at(x, y);
    }
  }
  return out;
}

GrayImage gaussian_blur_5x5(const GrayImage& img, double sigma) {
  require_min_size(img, 1, 1, "gaussian_blur_5x5");
  double kernel[5][5];
  double sum = 0.0;
  for (int dy = -2; dy <= 2; ++dy) {
    for (int dx = -2; dx <= 2; ++dx) {
      const double v = std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
      kernel[dy + 2][dx + 2] = v;
      sum += v;
    }
  }
  for (auto& row : kernel)
    for (double& v : row) v /= sum;

  const int w = img.width, h = img.height;
  GrayImage out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int dy = -2; dy <= 2; ++dy) {
        const int yy = clampi(y + dy, 0, h - 1);
        for (int dx = -2; dx <= 2; ++dx) {
          const int xx = clampi(x + dx, 0, w - 1);
          acc += kernel[dy + 2][dx + 2] * img.at(xx, yy);
        }
      }
      out.at(x, y) = acc;
    }
  }
  return out;
}

GrayImage canny_gradient_magnitude(const GrayImage& img, double sigma) {
  require_min_size(img, 3, 3, "canny_gradient_magnitude");
  const GrayImage blurred = gaussian_blur_5x5(img, sigma);
  const GradientField g = sobel_gradients(blurred);
  GrayImage mag(img.width, img.height);
  for (std::size_t i = 0; i < mag.size(); ++i) {
    mag.data[i] = std::hypot(g.gx[i], g.gy[i]);
  }
  return mag;
}

PixelMask canny_edges(const GrayImage& img, double low_thresh, double high_thresh,
                      double sigma) {
  if (!(low_thresh > 0.0) || !(low_thresh < high_thresh)) {
    throw std::invalid_argument("canny_edges: requires 0 < low_thresh < high_thresh");
  }
  require_min_size(img, 3, 3, "canny_edges");
  const int w = img.width, h = img.height;

  const GrayImage blurred = gaussian_blur_5x5(img, sigma);
  const GradientField g = sobel_gradients(blurred);
  std::vector<double> mag(img.size());
  for (std::size_t i = 0; i < mag.size(); ++i) mag[i] = std::hypot(g.gx[i], g.gy[i]);

  // Non-maximum suppression along the gradient direction quantized to four
  // bins. Ties keep the forward-side pixel so a symmetric ridge thins to one
  // pixel: survive iff m > m(-d) and m >= m(+d).
  static constexpr int dir_dx[4] = {1, 1, 0, -1};
  static constexpr int dir_dy[4] = {0, 1, 1, 1};
  std::vector<std::uint8_t> thin(img.size(), 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      if (mag[i] < low_thresh) continue;
      double angle = std::atan2(g.gy[i], g.gx[i]);
      if (angle < 0.0) angle += std::numbers::pi;
      int bin = static_cast<int>((angle + std::numbers::pi / 8.0) / (std::numbers::pi / 4.0));
      bin %= 4;
      const int dx = dir_dx[bin], dy = dir_dy[bin];
      const int fx = clampi(x + dx, 0, w - 1), fy = clampi(y + dy, 0, h - 1);
      const int bx = clampi(x - dx, 0, w - 1), by = clampi(y - dy, 0, h - 1);
      const double fwd = (fx == x && fy == y) ? 0.0 : mag[static_cast<std::size_t>(fy) * w + fx];
      const double bwd = (bx == x && by == y) ? 0.0 : mag[static_cast<std::size_t>(by) * w + bx];
      if (mag[i] > bwd && mag[i] >= fwd) thin[i] = 1;
    }
  }

  // Double-threshold hysteresis: strong pixels seed an 8-connected flood
  // through weak (>= low) thinned pixels.
  PixelMask out(w, h, false);
  std::vector<std::size_t> stack;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      if (thin[i] && mag[i] >= high_thresh && !out.bits[i]) {
        out.bits[i] = 1;
        stack.push_back(i);
        while (!stack.empty()) {
          const std::size_t j = stack.back();
          stack.pop_back();
          const int jx = static_cast<int>(j % w), jy = static_cast<int>(j / w);
          for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
              const int nx = jx + dx, ny = jy + dy;
              if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
              const std::size_t n = static_cast<std::size_t>(ny) * w + nx;
              if (thin[n] && !out.bits[n]) {
                out.bits[n] = 1;
                stack.push_back(n);
              }
            }
          }
        }
      }
    }
  }
  return out;
}

namespace {

// Bresenham circle of radius 3, clockwise from 12 o'clock.
constexpr int kCircleDx[16] = {0, 1, 2, 3, 3, 3, 2, 1, 0, -1, -2, -3, -3, -3, -2, -1};
constexpr int kCircleDy[16] = {-3, -3, -2, -1, 0, 1, 2, 3, 3, 3, 2, 1, 0, -1, -2, -3};

bool fast9_is_corner(const GrayImage& img, int x, int y, double t, double* score) {
  const double c = img.at(x, y);
  int state[16];  // +1 brighter, -1 darker, 0 similar
  for (int k = 0; k < 16; ++k) {
    const double p = img.at(x + kCircleDx[k], y + kCircleDy[k]);
    state[k] = p > c + t ? 1 : (p < c - t ? -1 : 0);
  }
  bool corner = false;
  for (int sign = -1; sign <= 1 && !corner; sign += 2) {
    int run = 0;
    // Wrap-around scan: 16 + 8 covers every contiguous run of length >= 9.
    for (int k = 0; k < 24; ++k) {
      if (state[k % 16] == sign) {
        if (++run >= 9) {
          corner = true;
          break;
        }
      } else {
        run = 0;
      }
    }
  }
  if (!corner) return false;
  double bright = 0.0, dark = 0.0;
  for (int k = 0; k < 16; ++k) {
    const double p = img.at(x + kCircleDx[k], y + kCircleDy[k]);
    if (state[k] == 1) bright += p - c - t;
    if (state[k] == -1) dark += c - p - t;
  }
  *score = std::max(bright, dark);
  return true;
}

}  // namespace

std::vector<FastKeypoint> fast_keypoints(const GrayImage& img, double intensity_thresh) {
  require_min_size(img, 7, 7, "fast_keypoints");
  const int w = img.width, h = img.height;

  std::vector<double> score(img.size(), -1.0);  // -1 = not a corner
  for (int y = 3; y < h - 3; ++y) {
    for (int x = 3; x < w - 3; ++x) {
      double s;
      if (fast9_is_corner(img, x, y, intensity_thresh, &s)) {
        score[static_cast<std::size_t>(y) * w + x] = s;
      }
    }
  }

  std::vector<FastKeypoint> out;
  for (int y = 3; y < h - 3; ++y) {
    for (int x = 3; x < w - 3; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      if (score[i] < 0.0) continue;
      bool keep = true;
      for (int dy = -1; dy <= 1 && keep; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          if (dx == 0 && dy == 0) continue;
          const int nx = x + dx, ny = y + dy;
          if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
          const double ns = score[static_cast<std::size_t>(ny) * w + nx];
          const bool neighbor_first = ny < y || (ny == y && nx < x);
          if (ns > score[i] || (ns == score[i] && neighbor_first)) {
            keep = false;
            break;
          }
        }
      }
      if (keep) out.push_back({x, y, score[i]});
    }
  }
  return out;
}

namespace {

using cplx = std::complex<double>;

int smallest_prime_factor(int n) {
  for (int p = 2; p * p <= n; ++p) {
    if (n % p == 0) return p;
  }
  return n;
}

// In-place strided DFT of length n over x[offset + k*stride], general
// Cooley-Tukey on the smallest prime factor, naive at primes.
void dft_1d(std::vector<cplx>& x, std::vector<cplx>& scratch, std::size_t offset,
            std::size_t stride, int n) {
  if (n == 1) return;
  const int p = smallest_prime_factor(n);
  const int m = n / p;
  if (p == n) {
    // Prime length: direct O(n^2) transform.
    for (int k = 0; k < n; ++k) {
      cplx acc(0.0, 0.0);
      for (int j = 0; j < n; ++j) {
        const double ang = -2.0 * std::numbers::pi * k * j / n;
        acc += x[offset + j * stride] * cplx(std::cos(ang), std::sin(ang));
      }
      scratch[k] = acc;
    }
    for (int k = 0; k < n; ++k) x[offset + k * stride] = scratch[k];
    return;
  }
  // Decimation in time: p interleaved sub-transforms of length m.
  for (int r = 0; r < p; ++r) {
    dft_1d(x, scratch, offset + r * stride, stride * p, m);
  }
  // Recombine with twiddle factors.
  std::vector<cplx> column(p);
  for (int k = 0; k < m; ++k) {
    for (int r = 0; r < p; ++r) {
      const double ang = -2.0 * std::numbers::pi * r * k / n;
      column[r] = x[offset + (k * p + r) * stride] * cplx(std::cos(ang), std::sin(ang));
    }
    for (int q = 0; q < p; ++q) {
      cplx acc(0.0, 0.0);
      for (int r = 0; r < p; ++r) {
        const double ang = -2.0 * std::numbers::pi * q * r / p;
        acc += column[r] * cplx(std::cos(ang), std::sin(ang));
      }
      scratch[q * m + k] = acc;
    }
  }
  for (int k = 0; k < n; ++k) x[offset + k * stride] = scratch[k];
}

}  // namespace

std::vector<std::complex<double>> dft_2d(const GrayImage& img) {
  const int w = img.width, h = img.height;
  if (w <= 0 || h <= 0) throw std::invalid_argument("dft_2d: empty image");
  std::vector<cplx> x(img.size());
  for (std::size_t i = 0; i < img.size(); ++i) x[i] = cplx(img.data[i], 0.0);
  std::vector<cplx> scratch(static_cast<std::size_t>(std::max(w, h)));
  for (int y = 0; y < h; ++y) {
    dft_1d(x, scratch, static_cast<std::size_t>(y) * w, 1, w);
  }
  for (int u = 0; u < w; ++u) {
    dft_1d(x, scratch, static_cast<std::size_t>(u), static_cast<std::size_t>(w), h);
  }
  return x;
}

double highfreq_energy_ratio(const GrayImage& img, double cutoff) {
  if (!(cutoff > 0.0) || !(cutoff < 1.0)) {
    throw std::invalid_argument("highfreq_energy_ratio: cutoff must be in (0, 1)");
  }
  if (img.empty()) throw std::invalid_argument("highfreq_energy_ratio: empty image");
  const int w = img.width, h = img.height;

  double mean = 0.0;
  for (double v : img.data) mean += v;
  mean /= static_cast<double>(img.size());
  GrayImage centered(w, h);
  for (std::size_t i = 0; i < img.size(); ++i) centered.data[i] = img.data[i] - mean;

  const auto spectrum = dft_2d(centered);
  double total = 0.0, high = 0.0;
  for (int v = 0; v < h; ++v) {
    const double fv = 2.0 * std::min(v, h - v) / h;
    for (int u = 0; u < w; ++u) {
      if (u == 0 && v == 0) continue;  // DC excluded
      const double fu = 2.0 * std::min(u, w - u) / w;
      const double e = std::norm(spectrum[static_cast<std::size_t>(v) * w + u]);
      total += e;
      if (std::sqrt(fu * fu + fv * fv) >= cutoff) high += e;
    }
  }
  return total > 0.0 ? high / total : 0.0;
}

}  // namespace domainscope
