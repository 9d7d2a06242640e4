#ifndef RESPICAM_FRAME_IO_HPP
#define RESPICAM_FRAME_IO_HPP

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "respicam/error.hpp"
#include "respicam/image.hpp"
#include "respicam/roi.hpp"

namespace respicam {

/// BT.601 luma, rounded and clamped to [0, 255].
GrayFrame to_grayscale(const RgbFrame& frame);

/// Either decoded representation; PGM/gray PNG yield gray, PPM/color PNG yield RGB.
using DecodedImage = std::variant<GrayFrame, RgbFrame>;

/// Decodes binary PGM (P5), PPM (P6) or PNG. Throws DecodeError.
DecodedImage read_image(const std::filesystem::path& path);

/// read_image followed by to_grayscale when needed.
GrayFrame read_gray(const std::filesystem::path& path);

void write_pgm(const std::filesystem::path& path, const GrayFrame& frame);
void write_ppm(const std::filesystem::path& path, const RgbFrame& frame);

/// Files named `frame_<digits>.{pgm,ppm,png}` in `dir`, sorted by name.
std::vector<std::filesystem::path> list_frames(const std::filesystem::path& dir);

/// Loads every frame in `dir` as grayscale. Throws NoFrames, DimensionMismatch, DecodeError.
FrameSequence load_sequence(const std::filesystem::path& dir, double fps);

/// Sub-image of `frame` covered by `box`; throws OutOfBounds unless the box lies inside.
template <typename Derived>
Image<typename Derived::Scalar> crop_roi(const Eigen::DenseBase<Derived>& frame,
                                         const BoundingBox& box) {
  if (box.w <= 0 || box.h <= 0 || box.x < 0 || box.y < 0 || box.x + box.w > frame.cols() ||
      box.y + box.h > frame.rows()) {
    throw Error(ErrorCode::OutOfBounds, "crop box exceeds frame bounds");
  }
  return frame.derived().block(box.y, box.x, box.h, box.w);
}

}  // namespace respicam

#endif  // RESPICAM_FRAME_IO_HPP
