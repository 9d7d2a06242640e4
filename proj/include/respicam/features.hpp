#ifndef RESPICAM_FEATURES_HPP
#define RESPICAM_FEATURES_HPP

#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "respicam/image.hpp"

namespace respicam {

/// Per-pixel windowed sums of Ix^2, IxIy and Iy^2.
struct StructureTensorField {
  FloatImage sxx;
  FloatImage sxy;
  FloatImage syy;
};

enum class DetectorKind { Harris, ShiTomasi };

std::string_view to_string(DetectorKind kind);
std::optional<DetectorKind> parse_detector_kind(std::string_view name);

struct FeaturePoint {
  double x = 0.0;
  double y = 0.0;
  double response = 0.0;
};

struct CornerParams {
  int max_count = 100;
  double quality = 0.01;
  double min_dist = 7.0;
  double harris_k = 0.04;
  int window = 3;
};

/// Sobel gradients summed over an odd `window` x `window` box, borders replicated.
/// Throws BadWindow for even or non-positive windows, ImageTooSmall if the image is
/// smaller than the window or the 3x3 gradient kernel.
StructureTensorField structure_tensor(const Eigen::Ref<const FloatImage>& img, int window = 3);

/// Harris: det(M) - k trace(M)^2. ShiTomasi: smaller eigenvalue of M (k unused).
FloatImage corner_response(const StructureTensorField& field, DetectorKind kind, double k = 0.04);

/// Greedy strongest-first selection above quality * max(R) with Euclidean
/// suppression radius `min_dist`. Equal responses resolve by (y, x) ascending.
/// Throws NoCorners when no pixel has a positive response above the threshold.
std::vector<FeaturePoint> select_corners(const Eigen::Ref<const FloatImage>& resp, int max_count,
                                         double quality, double min_dist);

/// structure_tensor -> corner_response -> select_corners.
std::vector<FeaturePoint> detect_corners(const Eigen::Ref<const FloatImage>& img, DetectorKind kind,
                                         const CornerParams& params = {});

}  // namespace respicam

#endif  // RESPICAM_FEATURES_HPP
