#ifndef RESPICAM_IMGPROC_HPP
#define RESPICAM_IMGPROC_HPP

#include <cmath>
#include <optional>
#include <string_view>

#include <Eigen/Core>

#include "respicam/error.hpp"
#include "respicam/image.hpp"

namespace respicam {

/// 3x3 coefficients in row-major order, applied by correlation (no flip).
using Kernel3x3 = Eigen::Matrix<double, 3, 3, Eigen::RowMajor>;

inline Kernel3x3 laplacian_kernel() {
  Kernel3x3 k;
  k << 0, 1, 0,
       1, -4, 1,
       0, 1, 0;
  return k;
}

inline Kernel3x3 sobel_x_kernel() {
  Kernel3x3 k;
  k << -1, 0, 1,
       -2, 0, 2,
       -1, 0, 1;
  return k;
}

inline Kernel3x3 sobel_y_kernel() {
  Kernel3x3 k;
  k << 1, 2, 1,
       0, 0, 0,
       -1, -2, -1;
  return k;
}

enum class FilterKind { None, Laplacian, Sobel };

std::string_view to_string(FilterKind kind);
std::optional<FilterKind> parse_filter_kind(std::string_view name);

/// Copy of `img` grown by `radius` pixels on each side with edge replication.
template <typename Derived>
FloatImage replicate_pad(const Eigen::DenseBase<Derived>& img, Eigen::Index radius) {
  const Eigen::Index h = img.rows();
  const Eigen::Index w = img.cols();
  FloatImage out(h + 2 * radius, w + 2 * radius);
  out.block(radius, radius, h, w) = img.derived().template cast<double>();
  for (Eigen::Index r = 0; r < radius; ++r) {
    out.block(radius, r, h, 1) = out.block(radius, radius, h, 1);
    out.block(radius, radius + w + r, h, 1) = out.block(radius, radius + w - 1, h, 1);
  }
  for (Eigen::Index r = 0; r < radius; ++r) {
    out.row(r) = out.row(radius);
    out.row(radius + h + r) = out.row(radius + h - 1);
  }
  return out;
}

/// Same-size 3x3 correlation with replicated borders.
template <typename Derived>
FloatImage convolve2d(const Eigen::DenseBase<Derived>& img, const Kernel3x3& k) {
  if (img.rows() < 3 || img.cols() < 3) {
    throw Error(ErrorCode::ImageTooSmall, "image must be at least 3x3");
  }
  const FloatImage padded = replicate_pad(img, 1);
  const Eigen::Index h = img.rows();
  const Eigen::Index w = img.cols();
  const Eigen::Index stride = padded.cols();
  FloatImage out(h, w);
  for (Eigen::Index y = 0; y < h; ++y) {
    const double* a = padded.data() + y * stride;
    const double* b = a + stride;
    const double* c = b + stride;
    double* o = out.data() + y * w;
    for (Eigen::Index x = 0; x < w; ++x) {
      o[x] = k(0, 0) * a[x] + k(0, 1) * a[x + 1] + k(0, 2) * a[x + 2] + k(1, 0) * b[x] +
             k(1, 1) * b[x + 1] + k(1, 2) * b[x + 2] + k(2, 0) * c[x] + k(2, 1) * c[x + 1] +
             k(2, 2) * c[x + 2];
    }
  }
  return out;
}

/// Discrete Laplacian, the 4-neighbour second-derivative kernel.
template <typename Derived>
FloatImage laplacian_filter(const Eigen::DenseBase<Derived>& img) {
  return convolve2d(img, laplacian_kernel());
}

/// Per-pixel gradient magnitude sqrt(Gx^2 + Gy^2) from the two Sobel kernels.
template <typename Derived>
FloatImage sobel_magnitude(const Eigen::DenseBase<Derived>& img) {
  if (img.rows() < 3 || img.cols() < 3) {
    throw Error(ErrorCode::ImageTooSmall, "image must be at least 3x3");
  }
  const FloatImage padded = replicate_pad(img, 1);
  const Eigen::Index h = img.rows();
  const Eigen::Index w = img.cols();
  const Eigen::Index stride = padded.cols();
  FloatImage out(h, w);
  for (Eigen::Index y = 0; y < h; ++y) {
    const double* a = padded.data() + y * stride;
    const double* b = a + stride;
    const double* c = b + stride;
    double* o = out.data() + y * w;
    for (Eigen::Index x = 0; x < w; ++x) {
      const double gx = (a[x + 2] - a[x]) + 2.0 * (b[x + 2] - b[x]) + (c[x + 2] - c[x]);
      const double gy = (a[x] - c[x]) + 2.0 * (a[x + 1] - c[x + 1]) + (a[x + 2] - c[x + 2]);
      o[x] = std::sqrt(gx * gx + gy * gy);
    }
  }
  return out;
}

template <typename Derived>
FloatImage apply_filter(const Eigen::DenseBase<Derived>& img, FilterKind kind) {
  switch (kind) {
    case FilterKind::Laplacian: return laplacian_filter(img);
    case FilterKind::Sobel: return sobel_magnitude(img);
    case FilterKind::None: break;
  }
  return img.derived().template cast<double>();
}

}  // namespace respicam

#endif  // RESPICAM_IMGPROC_HPP
