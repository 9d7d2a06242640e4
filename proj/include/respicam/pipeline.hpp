#ifndef RESPICAM_PIPELINE_HPP
#define RESPICAM_PIPELINE_HPP

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "respicam/error.hpp"
#include "respicam/features.hpp"
#include "respicam/image.hpp"
#include "respicam/imgproc.hpp"
#include "respicam/manifest.hpp"
#include "respicam/roi.hpp"
#include "respicam/settings.hpp"

namespace respicam {

/// One cell of the filter x box size x detector matrix.
struct PipelineConfig {
  FilterKind filter = FilterKind::None;
  SizeClass bbox = SizeClass::Medium;
  DetectorKind detector = DetectorKind::Harris;

  /// Four-letter code, e.g. "SOBM" for Sobel with the medium box.
  std::string acronym() const;
  /// "Harris - SOBM".
  std::string method() const;

  friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

/// All 18 configurations: ShiTomasi block first, each block FL, LP, SO x M, L, S.
std::vector<PipelineConfig> all_configs();

/// Config from an acronym such as "FLBM" plus a detector name.
std::optional<PipelineConfig> parse_config(std::string_view acronym, std::string_view detector);

/// Random-access grayscale frames of one clip.
class FrameSource {
 public:
  virtual ~FrameSource() = default;
  virtual std::size_t size() const = 0;
  virtual double fps() const = 0;
  virtual GrayFrame frame(std::size_t index) const = 0;
};

/// Frames already in memory.
class SequenceSource final : public FrameSource {
 public:
  explicit SequenceSource(const FrameSequence& seq) : seq_(seq) {}
  std::size_t size() const override { return seq_.size(); }
  double fps() const override { return seq_.fps; }
  GrayFrame frame(std::size_t index) const override { return seq_.frames[index]; }

 private:
  const FrameSequence& seq_;
};

/// Frames decoded lazily from a `frame_%06d.*` directory.
class DirectorySource final : public FrameSource {
 public:
  /// Throws NoFrames.
  DirectorySource(const std::filesystem::path& dir, double fps);
  std::size_t size() const override { return files_.size(); }
  double fps() const override { return fps_; }
  /// Throws DecodeError, DimensionMismatch.
  GrayFrame frame(std::size_t index) const override;

 private:
  std::vector<std::filesystem::path> files_;
  double fps_;
  mutable Eigen::Index rows_ = -1;
  mutable Eigen::Index cols_ = -1;
};

/// Result of one configuration on one clip: an estimate or the failure that stopped it.
struct ConfigOutcome {
  PipelineConfig config;
  std::optional<double> estimate_bpm;
  std::optional<ErrorCode> failure;
  std::string message;
};

/// Runs every config in `configs` over the clip in a single pass. Per-config
/// failures are captured in the outcome; errors that affect the whole clip
/// (decode, dimension mismatch) propagate.
std::vector<ConfigOutcome> evaluate_clip(const FrameSource& source, const BoundingBox& face,
                                         std::span<const PipelineConfig> configs,
                                         const Settings& settings = {});

/// Full chain for one subject and config. Throws the failing stage's Error.
double run_config(const SubjectRecord& record, const PipelineConfig& config,
                  const Settings& settings = {});

/// Trim, aggregate, band-pass, normalise and count peaks for tracks that
/// survived the whole clip. Throws NoTracks, ConstantSignal, BadCutoff.
double estimate_rate(std::span<const TrackSeries> full_tracks, double fps, const Settings& settings);

}  // namespace respicam

#endif  // RESPICAM_PIPELINE_HPP
