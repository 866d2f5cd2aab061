#ifndef DOMAINSCOPE_TESTS_FIXTURES_HPP
#define DOMAINSCOPE_TESTS_FIXTURES_HPP

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <random>
#include <string>

#include "domainscope/image.hpp"

namespace testsupport {

inline domainscope::GrayImage random_gray(std::mt19937& rng, int w, int h, double lo = 0.0,
                                          double hi = 255.0) {
  // Integer-valued pixels keep convolution sums exactly representable.
  std::uniform_int_distribution<int> dist(static_cast<int>(lo), static_cast<int>(hi));
  domainscope::GrayImage img(w, h);
  for (double& v : img.data) v = dist(rng);
  return img;
}

inline domainscope::RasterImage random_rgb(std::mt19937& rng, int w, int h, int lo = 0,
                                           int hi = 255) {
  std::uniform_int_distribution<int> dist(lo, hi);
  domainscope::RasterImage img;
  img.width = w;
  img.height = h;
  img.channels = 3;
  img.data.resize(static_cast<std::size_t>(w) * h * 3);
  for (auto& v : img.data) v = static_cast<std::uint8_t>(dist(rng));
  return img;
}

// Unique scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<unsigned> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("domainscope_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string str() const { return path_.string(); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

}  // namespace testsupport

#endif  // DOMAINSCOPE_TESTS_FIXTURES_HPP
