#ifndef RESPICAM_TRACKING_HPP
#define RESPICAM_TRACKING_HPP

#include <span>
#include <vector>

#include <Eigen/Core>

#include "respicam/features.hpp"
#include "respicam/image.hpp"
#include "respicam/imgproc.hpp"

namespace respicam {

struct FlowParams {
  int window = 21;
  int pyramid_levels = 3;
  int max_iters = 30;
  double eps = 0.01;
  double min_eig_threshold = 1e-4;

  /// Throws PreconditionViolation on an even window or non-positive field.
  void validate() const;
};

/// Gaussian pyramid; level 0 is the input, each further level half resolution.
class ImagePyramid {
 public:
  ImagePyramid() = default;
  ImagePyramid(FloatImage base, int levels);

  int levels() const { return static_cast<int>(levels_.size()); }
  const FloatImage& level(int i) const { return levels_[static_cast<std::size_t>(i)]; }

 private:
  std::vector<FloatImage> levels_;
};

/// Half-resolution image: separable [1 4 6 4 1]/16 blur then every other sample.
FloatImage pyr_down(const FloatImage& img);

enum class TrackStatus { Tracked, Lost };

struct FlowResult {
  Eigen::Vector2d position;
  TrackStatus status;
};

/// Iterative coarse-to-fine Lucas-Kanade for one point between two pyramids.
/// `initial_flow` is the starting displacement estimate at full resolution.
FlowResult lk_track_point(const ImagePyramid& prev, const ImagePyramid& next,
                          const Eigen::Vector2d& point, const FlowParams& params,
                          const Eigen::Vector2d& initial_flow = Eigen::Vector2d::Zero());

/// Flow of every point from `prev` to `next`. Throws DimensionMismatch.
std::vector<FlowResult> lk_flow_step(const FloatImage& prev, const FloatImage& next,
                                     std::span<const FeaturePoint> points,
                                     const FlowParams& params = {});

/// Positions of one tracked point, one entry per frame while alive.
struct TrackSeries {
  int point_id = 0;
  std::vector<double> x;
  std::vector<double> y;
  bool alive = true;

  std::size_t length() const { return y.size(); }
};

/// Frame-by-frame tracker; lost points stop receiving samples and never resume.
class PointTracker {
 public:
  PointTracker(FloatImage first, std::span<const FeaturePoint> initial, FlowParams params = {});

  void advance(FloatImage next);

  const std::vector<TrackSeries>& tracks() const { return tracks_; }
  std::size_t frames() const { return frames_; }
  std::size_t alive_count() const;

 private:
  FlowParams params_;
  ImagePyramid prev_;
  std::vector<TrackSeries> tracks_;
  std::size_t frames_ = 1;
};

/// Tracks `initial` through `seq` on the `filter` representation of every frame.
/// Throws PreconditionViolation for fewer than two frames or no points and
/// TrackingCollapse when every point is lost before half of the frames.
std::vector<TrackSeries> track_points(const FrameSequence& seq,
                                      std::span<const FeaturePoint> initial,
                                      const FlowParams& params = {},
                                      FilterKind filter = FilterKind::None);

/// Throws TrackingCollapse if no series reaches half of `frame_count`.
void check_collapse(std::span<const TrackSeries> tracks, std::size_t frame_count);

}  // namespace respicam

#endif  // RESPICAM_TRACKING_HPP
