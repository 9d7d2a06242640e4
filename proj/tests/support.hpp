#ifndef RESPICAM_TESTS_SUPPORT_HPP
#define RESPICAM_TESTS_SUPPORT_HPP

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

#include "respicam/image.hpp"

namespace testing {

/// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("respicam_" + tag + "_" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

/// Smooth analytic texture sampled at (x + dx, y + dy): shifting the image by
/// (-dx, -dy) is exact, with no interpolation error.
inline respicam::FloatImage wave_texture(int w, int h, double dx = 0.0, double dy = 0.0,
                                         std::uint64_t seed = 7) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> freq(0.25, 0.9);
  std::uniform_real_distribution<double> phase(0.0, 6.283185307179586);
  double fx[8], fy[8], ph[8];
  for (int k = 0; k < 8; ++k) {
    const double angle = phase(rng);
    const double f = freq(rng);
    fx[k] = f * std::cos(angle);
    fy[k] = f * std::sin(angle);
    ph[k] = phase(rng);
  }
  respicam::FloatImage img(h, w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double v = 128.0;
      for (int k = 0; k < 8; ++k) v += 12.0 * std::sin(fx[k] * (x + dx) + fy[k] * (y + dy) + ph[k]);
      img(y, x) = v;
    }
  }
  return img;
}

inline void add_noise(respicam::FloatImage& img, double sigma, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, sigma);
  for (Eigen::Index i = 0; i < img.size(); ++i) img.data()[i] += n(rng);
}

}  // namespace testing

#endif  // RESPICAM_TESTS_SUPPORT_HPP
