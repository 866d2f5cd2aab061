#include <doctest.h>

#include <random>

#include "domainscope/geometry.hpp"
#include "support/fixtures.hpp"

using namespace domainscope;
using namespace testsupport;

TEST_SUITE_BEGIN("geometry");

namespace {
const CalibrationProfile kIdentity = CalibrationProfile::with_identity_normalization();

DepthMap ramp_depth(int w, int h, double per_x, double per_y, double base = 0.0) {
  DepthMap d;
  d.width = w;
  d.height = h;
  d.values.resize(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      d.values[static_cast<std::size_t>(y) * w + x] = base + per_x * x + per_y * y;
  return d;
}
}  // namespace

TEST_CASE("horizontal ramp d = 6x/w gives delta_lr exactly 3") {
  const int w = 64, h = 64;
  DepthMap d = ramp_depth(w, h, 6.0 / w, 0.0);
  GrayImage img(w, h, 100.0);
  PixelMask bg(w, h, true);
  auto m = compute_geometry(d, img, bg, kIdentity);
  REQUIRE(m.has_value());
  CHECK(m->delta_lr == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(m->delta_tb == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(m->brightness_gradient == 0.0);
}

TEST_CASE("flat depth yields zero deltas and zero range") {
  DepthMap d = ramp_depth(32, 32, 0.0, 0.0, 5.0);
  GrayImage img(32, 32, 80.0);
  PixelMask bg(32, 32, true);
  auto m = compute_geometry(d, img, bg, kIdentity);
  REQUIRE(m.has_value());
  CHECK(m->delta_lr == 0.0);
  CHECK(m->delta_tb == 0.0);
  CHECK(m->depth_range == 0.0);
}

TEST_CASE("depth range is p98 - p2 when trimming, max - min otherwise") {
  const int w = 40, h = 40;  // 1600 pixels
  DepthMap d = ramp_depth(w, h, 0.0, 0.0, 5.0);
  d.values[0] = 1000.0;  // single outlier
  GrayImage img(w, h, 80.0);
  PixelMask bg(w, h, true);

  auto trimmed = compute_geometry(d, img, bg, kIdentity);
  REQUIRE(trimmed.has_value());
  CHECK(trimmed->depth_range == 0.0);  // outlier falls outside p2..p98

  CalibrationProfile no_trim = kIdentity;
  no_trim.depth_range_trim = false;
  auto full = compute_geometry(d, img, bg, no_trim);
  REQUIRE(full.has_value());
  CHECK(full->depth_range == doctest::Approx(995.0).epsilon(1e-12));
}

TEST_CASE("underpopulated half-regions return nullopt") {
  const int w = 30, h = 30;
  DepthMap d = ramp_depth(w, h, 0.1, 0.0);
  GrayImage img(w, h, 80.0);
  PixelMask left_only(w, h, false);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < 12; ++x) left_only.set(x, y, true);  // right half: 0 < 100
  CHECK_FALSE(compute_geometry(d, img, left_only, kIdentity).has_value());

  PixelMask full(w, h, true);  // every half holds 450 >= 100
  CHECK(compute_geometry(d, img, full, kIdentity).has_value());
}

TEST_CASE("invalid depth pixels are excluded from the region means") {
  const int w = 32, h = 32;
  DepthMap d = ramp_depth(w, h, 0.0, 0.0, 2.0);
  d.valid.assign(d.values.size(), 1);
  // Poison the left half with huge values marked invalid; means must ignore them.
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < 8; ++x) {
      d.values[static_cast<std::size_t>(y) * w + x] = 9999.0;
      d.valid[static_cast<std::size_t>(y) * w + x] = 0;
    }
  }
  GrayImage img(w, h, 80.0);
  PixelMask bg(w, h, true);
  auto m = compute_geometry(d, img, bg, kIdentity);
  REQUIRE(m.has_value());
  CHECK(m->delta_lr == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(m->depth_range == 0.0);
}

TEST_CASE("brightness gradient is signed top minus bottom over all pixels") {
  const int w = 24, h = 24;
  DepthMap d = ramp_depth(w, h, 0.0, 0.0, 1.0);
  GrayImage img(w, h, 0.0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) img.at(x, y) = y < h / 2 ? 200.0 : 100.0;
  PixelMask bg(w, h, true);
  auto m = compute_geometry(d, img, bg, kIdentity);
  REQUIRE(m.has_value());
  CHECK(m->brightness_gradient == doctest::Approx(100.0).epsilon(1e-12));
  CHECK(classify_perspective(*m, kIdentity) == Perspective::front);

  // Flip the lighting: negative gradient must not trigger the front rule.
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) img.at(x, y) = y < h / 2 ? 100.0 : 200.0;
  auto m2 = compute_geometry(d, img, bg, kIdentity);
  REQUIRE(m2.has_value());
  CHECK(m2->brightness_gradient == doctest::Approx(-100.0).epsilon(1e-12));
  CHECK(classify_perspective(*m2, kIdentity) == Perspective::nadir);
}

TEST_CASE("depth offset leaves all depth statistics unchanged") {
  std::mt19937 rng(47);
  std::uniform_real_distribution<double> val(0.0, 10.0);
  for (int trial = 0; trial < 10; ++trial) {
    const int w = 32, h = 32;
    DepthMap d;
    d.width = w;
    d.height = h;
    d.values.resize(static_cast<std::size_t>(w) * h);
    for (double& v : d.values) v = val(rng);
    DepthMap shifted = d;
    for (double& v : shifted.values) v += 123.0;

    GrayImage img = random_gray(rng, w, h);
    PixelMask bg(w, h, true);
    auto a = compute_geometry(d, img, bg, kIdentity);
    auto b = compute_geometry(shifted, img, bg, kIdentity);
    REQUIRE(a.has_value());
    REQUIRE(b.has_value());
    CHECK(a->delta_lr == doctest::Approx(b->delta_lr).epsilon(1e-9));
    CHECK(a->delta_tb == doctest::Approx(b->delta_tb).epsilon(1e-9));
    CHECK(a->depth_range == doctest::Approx(b->depth_range).epsilon(1e-9));
  }
}

TEST_CASE("geometry metrics respect flip symmetries") {
  std::mt19937 rng(53);
  std::uniform_real_distribution<double> val(0.0, 10.0);
  std::bernoulli_distribution keep(0.85);
  for (int trial = 0; trial < 10; ++trial) {
    const int w = 32, h = 32;
    DepthMap d;
    d.width = w;
    d.height = h;
    d.values.resize(static_cast<std::size_t>(w) * h);
    for (double& v : d.values) v = val(rng);
    GrayImage img = random_gray(rng, w, h);
    PixelMask bg(w, h, false);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) bg.set(x, y, keep(rng));

    auto base = compute_geometry(d, img, bg, kIdentity);
    REQUIRE(base.has_value());

    DepthMap dh = d;
    GrayImage ih = img;
    PixelMask bh = bg;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        dh.values[static_cast<std::size_t>(y) * w + x] = d.at(w - 1 - x, y);
        ih.at(x, y) = img.at(w - 1 - x, y);
        bh.set(x, y, bg.at(w - 1 - x, y));
      }
    }
    auto hflip = compute_geometry(dh, ih, bh, kIdentity);
    REQUIRE(hflip.has_value());
    CHECK(hflip->delta_lr == doctest::Approx(base->delta_lr).epsilon(1e-9));
    CHECK(hflip->delta_tb == doctest::Approx(base->delta_tb).epsilon(1e-9));
    CHECK(hflip->depth_range == doctest::Approx(base->depth_range).epsilon(1e-9));
    CHECK(hflip->brightness_gradient ==
          doctest::Approx(base->brightness_gradient).epsilon(1e-9));

    DepthMap dv = d;
    GrayImage iv = img;
    PixelMask bv = bg;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        dv.values[static_cast<std::size_t>(y) * w + x] = d.at(x, h - 1 - y);
        iv.at(x, y) = img.at(x, h - 1 - y);
        bv.set(x, y, bg.at(x, h - 1 - y));
      }
    }
    auto vflip = compute_geometry(dv, iv, bv, kIdentity);
    REQUIRE(vflip.has_value());
    CHECK(vflip->delta_lr == doctest::Approx(base->delta_lr).epsilon(1e-9));
    CHECK(vflip->delta_tb == doctest::Approx(base->delta_tb).epsilon(1e-9));
    CHECK(vflip->depth_range == doctest::Approx(base->depth_range).epsilon(1e-9));
    CHECK(vflip->brightness_gradient ==
          doctest::Approx(-base->brightness_gradient).epsilon(1e-9));
  }
}

TEST_CASE("dimension mismatches are rejected") {
  DepthMap d = ramp_depth(16, 16, 0.1, 0.0);
  GrayImage img(16, 16, 80.0);
  PixelMask bg(8, 8, true);
  CHECK_THROWS_AS(compute_geometry(d, img, bg, kIdentity), std::invalid_argument);
}

TEST_SUITE_END();
