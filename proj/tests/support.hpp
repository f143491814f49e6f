#pragma once

#include "walshreg/geometry.hpp"
#include "walshreg/transforms.hpp"

#include <atomic>
#include <filesystem>
#include <random>
#include <string>

#include <unistd.h>

namespace testing {

inline walshreg::Patch random_patch(std::mt19937_64& rng, int side, bool integer = false) {
  std::uniform_real_distribution<double> real(-100.0, 100.0);
  std::uniform_int_distribution<int> whole(-50, 50);
  walshreg::Patch p(side);
  for (double& v : p.samples) v = integer ? whole(rng) : real(rng);
  return p;
}

inline walshreg::GrayImage random_image(std::mt19937_64& rng, int w, int h, int lo = 0, int hi = 255) {
  std::uniform_int_distribution<int> d(lo, hi);
  walshreg::GrayImage img(w, h);
  for (auto& v : img.pixels) v = static_cast<std::uint8_t>(d(rng));
  return img;
}

inline walshreg::GrayImage scaled(const walshreg::GrayImage& img, int c) {
  walshreg::GrayImage out = img;
  for (auto& v : out.pixels) v = static_cast<std::uint8_t>(v * c);
  return out;
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& tag) {
  static std::atomic<int> counter{0};
  const auto dir = std::filesystem::temp_directory_path() /
                   ("walshreg_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

#ifdef WALSHREG_TEST_DATA
inline std::string data_file(const char* name) { return std::string(WALSHREG_TEST_DATA) + "/" + name; }
#endif

}  // namespace testing
