#ifndef RESPICAM_IMAGE_HPP
#define RESPICAM_IMAGE_HPP

#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace respicam {

/// Row-major 2D image: rows are y, columns are x. Pixel (x, y) is img(y, x).
template <typename Scalar>
using Image = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// 8-bit grayscale frame as ingested from disk.
using GrayFrame = Image<std::uint8_t>;

/// Real-valued image; holds filter responses, pyramids, corner responses.
using FloatImage = Image<double>;

/// Interleaved 8-bit RGB; one row per pixel in raster order.
struct RgbFrame {
  int width = 0;
  int height = 0;
  Eigen::Array<std::uint8_t, Eigen::Dynamic, 3, Eigen::RowMajor> data;

  RgbFrame() = default;
  RgbFrame(int w, int h) : width(w), height(h), data(static_cast<Eigen::Index>(w) * h, 3) {
    data.setZero();
  }
};

/// Ordered frames of identical size sampled at `fps`.
struct FrameSequence {
  std::vector<GrayFrame> frames;
  double fps = 0.0;

  std::size_t size() const { return frames.size(); }
  int width() const { return frames.empty() ? 0 : static_cast<int>(frames.front().cols()); }
  int height() const { return frames.empty() ? 0 : static_cast<int>(frames.front().rows()); }
  double duration_s() const { return fps > 0.0 ? static_cast<double>(frames.size()) / fps : 0.0; }
};

template <typename Derived>
FloatImage to_float(const Eigen::DenseBase<Derived>& img) {
  return img.derived().template cast<double>();
}

}  // namespace respicam

#endif  // RESPICAM_IMAGE_HPP
