#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "domainscope/vision_ops.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace domainscope;
using namespace testsupport;

TEST_SUITE_BEGIN("vision_ops");

TEST_CASE("grayscale uses the standard luma weights") {
  RasterImage img;
  img.width = 3;
  img.height = 1;
  img.channels = 3;
  img.data = {255, 0, 0, 0, 255, 0, 0, 0, 255};
  GrayImage g = to_grayscale(img);
  CHECK(g.at(0, 0) == doctest::Approx(0.299 * 255).epsilon(1e-12));
  CHECK(g.at(1, 0) == doctest::Approx(0.587 * 255).epsilon(1e-12));
  CHECK(g.at(2, 0) == doctest::Approx(0.114 * 255).epsilon(1e-12));
}

TEST_CASE("sobel and laplacian match naive references exactly") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    std::uniform_int_distribution<int> dim(3, 24);
    GrayImage img = random_gray(rng, dim(rng), dim(rng));
    GradientField lib = sobel_gradients(img);
    GradientField ref = naive_sobel(img);
    REQUIRE(lib.gx.size() == ref.gx.size());
    for (std::size_t i = 0; i < lib.gx.size(); ++i) {
      CHECK(lib.gx[i] == ref.gx[i]);
      CHECK(lib.gy[i] == ref.gy[i]);
    }
    auto lap = laplacian(img);
    auto lap_ref = naive_laplacian(img);
    for (std::size_t i = 0; i < lap.size(); ++i) CHECK(lap[i] == lap_ref[i]);
  }
}

TEST_CASE("constant image has zero gradients and laplacian") {
  GrayImage img(9, 7, 42.0);
  GradientField g = sobel_gradients(img);
  for (double v : g.gx) CHECK(v == 0.0);
  for (double v : g.gy) CHECK(v == 0.0);
  for (double v : laplacian(img)) CHECK(v == 0.0);
}

TEST_CASE("gaussian blur preserves a constant image and the mean") {
  GrayImage img(12, 10, 97.0);
  GrayImage out = gaussian_blur_5x5(img, 1.4);
  for (double v : out.data) CHECK(v == doctest::Approx(97.0).epsilon(1e-12));
}

TEST_CASE("canny gradient stage equals naive gaussian+sobel") {
  std::mt19937 rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    std::uniform_int_distribution<int> dim(5, 24);
    GrayImage img = random_gray(rng, dim(rng), dim(rng));
    GrayImage lib = canny_gradient_magnitude(img, 1.4);
    GrayImage ref = naive_canny_gradient(img, 1.4);
    for (std::size_t i = 0; i < lib.size(); ++i) {
      CHECK(lib.data[i] == doctest::Approx(ref.data[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("canny finds a vertical step edge and nothing on flat images") {
  GrayImage img(20, 12, 0.0);
  for (int y = 0; y < 12; ++y)
    for (int x = 10; x < 20; ++x) img.at(x, y) = 200.0;
  PixelMask edges = canny_edges(img, 50.0, 150.0);
  CHECK(edges.count() > 0);
  // All edge pixels hug the step column.
  for (int y = 0; y < 12; ++y)
    for (int x = 0; x < 20; ++x)
      if (edges.at(x, y)) CHECK(std::abs(x - 10) <= 2);

  GrayImage flat(20, 12, 128.0);
  CHECK(canny_edges(flat, 50.0, 150.0).count() == 0);
  CHECK_THROWS_AS(canny_edges(img, 150.0, 50.0), std::invalid_argument);
  CHECK_THROWS_AS(canny_edges(img, 0.0, 50.0), std::invalid_argument);
}

TEST_CASE("fast keypoints: isolated bright dot is one corner, flat is none") {
  GrayImage img(15, 15, 10.0);
  img.at(7, 7) = 200.0;
  auto kps = fast_keypoints(img, 20.0);
  REQUIRE(kps.size() == 1);
  CHECK(kps[0].x == 7);
  CHECK(kps[0].y == 7);

  GrayImage flat(15, 15, 77.0);
  CHECK(fast_keypoints(flat, 20.0).empty());
}

TEST_CASE("fast keypoints match the naive segment test + NMS") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    std::uniform_int_distribution<int> dim(7, 28);
    GrayImage img = random_gray(rng, dim(rng), dim(rng));
    auto lib = fast_keypoints(img, 20.0);
    auto ref = naive_fast9(img, 20.0);
    REQUIRE(lib.size() == ref.size());
    for (std::size_t i = 0; i < lib.size(); ++i) {
      CHECK(lib[i].x == ref[i].x);
      CHECK(lib[i].y == ref[i].y);
      CHECK(lib[i].score == ref[i].score);
    }
  }
}

TEST_CASE("dft matches the direct transform, prime sizes included") {
  std::mt19937 rng(19);
  for (int w : {4, 7, 12, 13}) {
    for (int h : {3, 5, 8}) {
      GrayImage img = random_gray(rng, w, h);
      auto lib = dft_2d(img);
      auto ref = naive_dft2d(img);
      REQUIRE(lib.size() == ref.size());
      for (std::size_t i = 0; i < lib.size(); ++i) {
        CHECK(std::abs(lib[i] - ref[i]) <= 1e-6 * (1.0 + std::abs(ref[i])));
      }
    }
  }
}

TEST_CASE("dft of an impulse is flat; of a constant is DC only") {
  GrayImage impulse(8, 8, 0.0);
  impulse.at(0, 0) = 1.0;
  for (const auto& bin : dft_2d(impulse)) CHECK(std::abs(bin - std::complex<double>(1, 0)) < 1e-9);

  GrayImage constant(6, 4, 3.0);
  auto spec = dft_2d(constant);
  CHECK(std::abs(spec[0] - std::complex<double>(72.0, 0.0)) < 1e-9);
  for (std::size_t i = 1; i < spec.size(); ++i) CHECK(std::abs(spec[i]) < 1e-9);
}

TEST_CASE("high-frequency ratio: nyquist cosine is 1, slow cosine is 0") {
  const int w = 16, h = 16;
  GrayImage nyquist(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) nyquist.at(x, y) = 128.0 + 100.0 * ((x % 2) ? -1.0 : 1.0);
  CHECK(highfreq_energy_ratio(nyquist, 0.25) == doctest::Approx(1.0).epsilon(1e-9));

  GrayImage slow(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      slow.at(x, y) = 128.0 + 100.0 * std::cos(2.0 * std::numbers::pi * x / w);
  CHECK(highfreq_energy_ratio(slow, 0.25) == doctest::Approx(0.0).epsilon(1e-9));

  GrayImage constant(w, h, 50.0);
  CHECK(highfreq_energy_ratio(constant, 0.25) == 0.0);
}

TEST_CASE("high-frequency ratio matches the naive spectrum split") {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    std::uniform_int_distribution<int> dim(4, 20);
    GrayImage img = random_gray(rng, dim(rng), dim(rng));
    const double lib = highfreq_energy_ratio(img, 0.3);
    const double ref = naive_highfreq_ratio(img, 0.3);
    CHECK(lib == doctest::Approx(ref).epsilon(1e-9));
  }
}

TEST_SUITE_END();
