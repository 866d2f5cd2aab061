#include <doctest.h>

#include <algorithm>
#include <random>

#include "domainscope/appearance.hpp"
#include "domainscope/vision_ops.hpp"
#include "support/fixtures.hpp"

using namespace domainscope;
using namespace testsupport;

TEST_SUITE_BEGIN("appearance");

namespace {
const CalibrationProfile kIdentity = CalibrationProfile::with_identity_normalization();
}

TEST_CASE("constant image scores zero visibility everywhere") {
  GrayImage img(16, 16, 120.0);
  VisibilityMetrics m = compute_visibility(img, kIdentity);
  CHECK(m.tenengrad == 0.0);
  CHECK(m.laplacian_var == 0.0);
  CHECK(m.rms_contrast == 0.0);
  CHECK(m.freq_energy == 0.0);
  CHECK(m.score == 0.0);
}

TEST_CASE("visibility score is the documented weighted sum") {
  std::mt19937 rng(31);
  GrayImage img = random_gray(rng, 20, 16);
  VisibilityMetrics m = compute_visibility(img, kIdentity);
  const double expect = 0.35 * m.tenengrad_n + 0.30 * m.laplacian_var_n +
                        0.20 * m.rms_contrast_n + 0.15 * m.freq_energy_n;
  CHECK(m.score == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("rms contrast is the luminance standard deviation over 255") {
  // Half the pixels at 0, half at 255: population std is exactly 127.5.
  GrayImage img(4, 4);
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 4; ++x) img.at(x, y) = (x < 2) ? 0.0 : 255.0;
  VisibilityMetrics m = compute_visibility(img, kIdentity);
  CHECK(m.rms_contrast == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("illumination median is the lower median with exact ratios") {
  GrayImage img(2, 2);
  img.at(0, 0) = 10.0;
  img.at(1, 0) = 20.0;
  img.at(0, 1) = 30.0;
  img.at(1, 1) = 40.0;
  IlluminationMetrics m = compute_illumination(img, kIdentity);
  CHECK(m.median_luminance == 20.0);  // lower of the two middles

  GrayImage extremes(4, 1);
  extremes.at(0, 0) = 5.0;    // under 30
  extremes.at(1, 0) = 250.0;  // over 225
  extremes.at(2, 0) = 100.0;
  extremes.at(3, 0) = 100.0;
  IlluminationMetrics e = compute_illumination(extremes, kIdentity);
  CHECK(e.underexposed_ratio == doctest::Approx(0.25));
  CHECK(e.overexposed_ratio == doctest::Approx(0.25));
}

TEST_CASE("exposure override applies only inside the medium band") {
  IlluminationMetrics m;
  m.median_luminance = 115.0;
  m.underexposed_ratio = 0.51;
  CHECK(classify_illumination(m, kIdentity) == Illumination::dark);
  m.underexposed_ratio = 0.0;
  m.overexposed_ratio = 0.51;
  CHECK(classify_illumination(m, kIdentity) == Illumination::bright);
  m.overexposed_ratio = 0.5;  // not strictly above the cutoff
  CHECK(classify_illumination(m, kIdentity) == Illumination::medium);

  // Median rule wins outside the band regardless of the ratios.
  m.median_luminance = 99.0;
  m.overexposed_ratio = 0.9;
  CHECK(classify_illumination(m, kIdentity) == Illumination::dark);
}

TEST_CASE("color distortion and ratio sentinels") {
  RasterImage blue;
  blue.width = 2;
  blue.height = 1;
  blue.channels = 3;
  blue.data = {0, 0, 255, 0, 0, 255};
  ColorMetrics m = compute_color(blue);
  CHECK(m.mean_b == doctest::Approx(1.0));
  CHECK(m.mean_g == 0.0);
  CHECK(std::isinf(m.blue_green_ratio));  // mu_G = 0 < mu_B
  CHECK(m.distortion == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(classify_color(m, kIdentity) == ColorCast::blue);

  RasterImage black;
  black.width = 1;
  black.height = 1;
  black.channels = 3;
  black.data = {0, 0, 0};
  ColorMetrics z = compute_color(black);
  CHECK(z.blue_green_ratio == 1.0);  // both channels empty
  CHECK(classify_color(z, kIdentity) == ColorCast::natural);
}

TEST_CASE("green cast needs both strong distortion and a low ratio") {
  ColorMetrics m;
  m.distortion = 0.7;
  m.blue_green_ratio = 0.5;
  CHECK(classify_color(m, kIdentity) == ColorCast::green);
  m.blue_green_ratio = 0.75;  // between the green and blue cutoffs
  CHECK(classify_color(m, kIdentity) == ColorCast::natural);
  m.distortion = 0.5;  // distortion below the gate
  m.blue_green_ratio = 0.5;
  CHECK(classify_color(m, kIdentity) == ColorCast::natural);
}

TEST_CASE("intensity offset leaves sharpness and contrast metrics alone") {
  std::mt19937 rng(37);
  for (int trial = 0; trial < 10; ++trial) {
    GrayImage img = random_gray(rng, 14, 14, 50, 200);
    GrayImage shifted = img;
    for (double& v : shifted.data) v += 17.0;
    VisibilityMetrics a = compute_visibility(img, kIdentity);
    VisibilityMetrics b = compute_visibility(shifted, kIdentity);
    CHECK(a.tenengrad == doctest::Approx(b.tenengrad).epsilon(1e-9));
    CHECK(a.laplacian_var == doctest::Approx(b.laplacian_var).epsilon(1e-9));
    CHECK(a.rms_contrast == doctest::Approx(b.rms_contrast).epsilon(1e-9));
    CHECK(a.freq_energy == doctest::Approx(b.freq_energy).epsilon(1e-9));
  }
}

TEST_SUITE_END();
