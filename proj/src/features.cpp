#include "respicam/features.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "respicam/error.hpp"
#include "respicam/imgproc.hpp"

namespace respicam {

std::string_view to_string(DetectorKind kind) {
  return kind == DetectorKind::Harris ? "Harris" : "ShiTomasi";
}

std::optional<DetectorKind> parse_detector_kind(std::string_view name) {
  if (name == "harris" || name == "Harris") return DetectorKind::Harris;
  if (name == "shitomasi" || name == "ShiTomasi" || name == "shi-tomasi") {
    return DetectorKind::ShiTomasi;
  }
  return std::nullopt;
}

namespace {

FloatImage box_sum(const FloatImage& img, int window) {
  const int r = window / 2;
  const FloatImage padded = replicate_pad(img, r);
  FloatImage out = FloatImage::Zero(img.rows(), img.cols());
  for (int dy = 0; dy < window; ++dy) {
    for (int dx = 0; dx < window; ++dx) out += padded.block(dy, dx, img.rows(), img.cols());
  }
  return out;
}

}  // namespace

StructureTensorField structure_tensor(const Eigen::Ref<const FloatImage>& img, int window) {
  if (window <= 0 || window % 2 == 0) {
    throw Error(ErrorCode::BadWindow, "structure tensor window must be odd and positive");
  }
  if (img.rows() < window || img.cols() < window) {
    throw Error(ErrorCode::ImageTooSmall, "image smaller than the tensor window");
  }
  const FloatImage ix = convolve2d(img, sobel_x_kernel());
  const FloatImage iy = convolve2d(img, sobel_y_kernel());
  return {box_sum(ix.square(), window), box_sum(ix * iy, window), box_sum(iy.square(), window)};
}

FloatImage corner_response(const StructureTensorField& f, DetectorKind kind, double k) {
  if (kind == DetectorKind::Harris) {
    const FloatImage trace = f.sxx + f.syy;
    return (f.sxx * f.syy - f.sxy.square()) - k * trace.square();
  }
  const FloatImage disc = ((f.sxx - f.syy).square() + 4.0 * f.sxy.square()).sqrt();
  // Rounding can push the smaller eigenvalue of a PSD matrix slightly negative.
  return (0.5 * ((f.sxx + f.syy) - disc)).max(0.0);
}

std::vector<FeaturePoint> select_corners(const Eigen::Ref<const FloatImage>& resp, int max_count,
                                         double quality, double min_dist) {
  if (max_count < 1) throw Error(ErrorCode::PreconditionViolation, "max_count must be >= 1");
  const double peak = resp.size() > 0 ? resp.maxCoeff() : 0.0;
  if (!(peak > 0.0)) throw Error(ErrorCode::NoCorners, "no positive corner response");
  const double threshold = quality * peak;

  struct Candidate {
    int x;
    int y;
    double r;
  };
  std::vector<Candidate> candidates;
  for (Eigen::Index y = 0; y < resp.rows(); ++y) {
    for (Eigen::Index x = 0; x < resp.cols(); ++x) {
      const double r = resp(y, x);
      if (r > 0.0 && r >= threshold) {
        candidates.push_back({static_cast<int>(x), static_cast<int>(y), r});
      }
    }
  }
  if (candidates.empty()) throw Error(ErrorCode::NoCorners, "no pixel passes the quality threshold");
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) { return a.r > b.r; });

  const double min_dist_sq = min_dist * min_dist;
  std::vector<FeaturePoint> kept;
  for (const Candidate& c : candidates) {
    const bool suppressed = std::any_of(kept.begin(), kept.end(), [&](const FeaturePoint& p) {
      const double dx = p.x - c.x;
      const double dy = p.y - c.y;
      return dx * dx + dy * dy < min_dist_sq;
    });
    if (suppressed) continue;
    kept.push_back({static_cast<double>(c.x), static_cast<double>(c.y), c.r});
    if (static_cast<int>(kept.size()) == max_count) break;
  }
  return kept;
}

std::vector<FeaturePoint> detect_corners(const Eigen::Ref<const FloatImage>& img, DetectorKind kind,
                                         const CornerParams& params) {
  const FloatImage resp =
      corner_response(structure_tensor(img, params.window), kind, params.harris_k);
  return select_corners(resp, params.max_count, params.quality, params.min_dist);
}

}  // namespace respicam
