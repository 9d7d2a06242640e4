#include "respicam/pipeline.hpp"

#include <algorithm>
#include <map>
#include <utility>

#include "respicam/frame_io.hpp"
#include "respicam/respsignal.hpp"
#include "respicam/tracking.hpp"

namespace respicam {

namespace {

std::string_view filter_code(FilterKind f) {
  switch (f) {
    case FilterKind::None: return "FL";
    case FilterKind::Laplacian: return "LP";
    case FilterKind::Sobel: return "SO";
  }
  return "??";
}

char size_code(SizeClass s) {
  switch (s) {
    case SizeClass::Small: return 'S';
    case SizeClass::Medium: return 'M';
    case SizeClass::Large: return 'L';
  }
  return '?';
}

constexpr std::array<FilterKind, 3> kFilters = {FilterKind::None, FilterKind::Laplacian,
                                                FilterKind::Sobel};

BoundingBox bounding_union(const BoundingBox& a, const BoundingBox& b) {
  const int x0 = std::min(a.x, b.x);
  const int y0 = std::min(a.y, b.y);
  const int x1 = std::max(a.x + a.w, b.x + b.w);
  const int y1 = std::max(a.y + a.h, b.y + b.h);
  return {x0, y0, x1 - x0, y1 - y0};
}

// Points tracked on one filtered representation, shared by every config using it.
struct FilterLane {
  FilterKind kind = FilterKind::None;
  std::vector<FeaturePoint> points;
  std::map<std::pair<int, int>, std::size_t> index_of;
  std::optional<PointTracker> tracker;

  std::size_t add(const FeaturePoint& p) {
    const auto key = std::make_pair(static_cast<int>(p.x), static_cast<int>(p.y));
    const auto [it, inserted] = index_of.emplace(key, points.size());
    if (inserted) points.push_back(p);
    return it->second;
  }
};

}  // namespace

std::string PipelineConfig::acronym() const {
  std::string out(filter_code(filter));
  out += 'B';
  out += size_code(bbox);
  return out;
}

std::string PipelineConfig::method() const {
  return std::string(to_string(detector)) + " - " + acronym();
}

std::vector<PipelineConfig> all_configs() {
  std::vector<PipelineConfig> out;
  for (DetectorKind d : {DetectorKind::ShiTomasi, DetectorKind::Harris}) {
    for (FilterKind f : kFilters) {
      for (SizeClass s : kAllSizeClasses) out.push_back({f, s, d});
    }
  }
  return out;
}

std::optional<PipelineConfig> parse_config(std::string_view acronym, std::string_view detector) {
  const auto det = parse_detector_kind(detector);
  if (!det) return std::nullopt;
  for (const PipelineConfig& c : all_configs()) {
    if (c.detector == *det && c.acronym() == acronym) return c;
  }
  return std::nullopt;
}

DirectorySource::DirectorySource(const std::filesystem::path& dir, double fps)
    : files_(list_frames(dir)), fps_(fps) {
  if (files_.size() < 2) throw Error(ErrorCode::NoFrames, "need at least two frames in " + dir.string());
  if (!(fps > 0.0)) throw Error(ErrorCode::PreconditionViolation, "fps must be positive");
}

GrayFrame DirectorySource::frame(std::size_t index) const {
  GrayFrame g = read_gray(files_.at(index));
  if (rows_ < 0) {
    rows_ = g.rows();
    cols_ = g.cols();
  } else if (g.rows() != rows_ || g.cols() != cols_) {
    throw Error(ErrorCode::DimensionMismatch, "frame size differs: " + files_[index].string());
  }
  return g;
}

double estimate_rate(std::span<const TrackSeries> full_tracks, double fps,
                     const Settings& settings) {
  if (full_tracks.empty()) throw Error(ErrorCode::NoTracks, "no point survived the whole clip");
  const std::vector<TrackSeries> kept = variance_trim(full_tracks, settings.trim_fraction);
  const MotionSignal raw = aggregate_motion(kept, fps);
  const MotionSignal z = z_normalize(bandpass(raw, settings.band));
  const auto peaks =
      detect_peaks(z, PeakParams::for_band(fps, settings.band.high_hz, settings.min_prominence));
  return respiration_rate(peaks, raw.duration_s());
}

std::vector<ConfigOutcome> evaluate_clip(const FrameSource& source, const BoundingBox& face,
                                         std::span<const PipelineConfig> configs,
                                         const Settings& settings) {
  const std::size_t n = source.size();
  if (n < 2) throw Error(ErrorCode::NoFrames, "need at least two frames");
  std::vector<ConfigOutcome> outcomes;
  for (const PipelineConfig& c : configs) outcomes.push_back({c, std::nullopt, std::nullopt, {}});
  auto fail = [](ConfigOutcome& o, const Error& e) {
    o.failure = e.code();
    o.message = e.detail();
  };

  const GrayFrame first = source.frame(0);
  const int width = static_cast<int>(first.cols());
  const int height = static_cast<int>(first.rows());

  // The tracking region depends only on the face box and geometry, so every
  // config sees identical filtered pixels however the configs are grouped.
  BoundingBox region;
  try {
    BoundingBox all = chest_box_unclamped(face, SizeClass::Small, settings.roi);
    for (SizeClass s : kAllSizeClasses) all = bounding_union(all, chest_box_unclamped(face, s, settings.roi));
    region = expand_box(all, settings.track_margin, width, height);
  } catch (const Error& e) {
    for (ConfigOutcome& o : outcomes) fail(o, Error(ErrorCode::RoiTooSmall, e.detail()));
    return outcomes;
  }

  std::array<FilterLane, 3> lanes;
  for (std::size_t i = 0; i < kFilters.size(); ++i) lanes[i].kind = kFilters[i];
  auto lane_of = [&](FilterKind f) -> FilterLane& {
    return lanes[static_cast<std::size_t>(std::find(kFilters.begin(), kFilters.end(), f) - kFilters.begin())];
  };

  const GrayFrame region0 = crop_roi(first, region);
  std::array<std::optional<FloatImage>, 3> filtered0;
  std::vector<std::vector<std::size_t>> members(outcomes.size());
  for (std::size_t ci = 0; ci < outcomes.size(); ++ci) {
    ConfigOutcome& o = outcomes[ci];
    try {
      const BoundingBox roi = chest_roi_from_face(face, o.config.bbox, width, height, settings.roi);
      const auto fi = static_cast<std::size_t>(
          std::find(kFilters.begin(), kFilters.end(), o.config.filter) - kFilters.begin());
      if (!filtered0[fi]) filtered0[fi] = apply_filter(region0, o.config.filter);
      const int ox = roi.x - region.x;
      const int oy = roi.y - region.y;
      const FloatImage roi_img = filtered0[fi]->block(oy, ox, roi.h, roi.w);
      FilterLane& lane = lane_of(o.config.filter);
      for (FeaturePoint p : detect_corners(roi_img, o.config.detector, settings.features)) {
        p.x += ox;
        p.y += oy;
        members[ci].push_back(lane.add(p));
      }
    } catch (const Error& e) {
      fail(o, e);
    }
  }

  for (std::size_t fi = 0; fi < lanes.size(); ++fi) {
    if (!lanes[fi].points.empty()) lanes[fi].tracker.emplace(*filtered0[fi], lanes[fi].points, settings.flow);
  }
  for (std::size_t t = 1; t < n; ++t) {
    const GrayFrame frame = source.frame(t);
    if (frame.rows() != height || frame.cols() != width) {
      throw Error(ErrorCode::DimensionMismatch, "frame size changed mid-clip");
    }
    const GrayFrame crop = crop_roi(frame, region);
    for (FilterLane& lane : lanes) {
      if (lane.tracker && lane.tracker->alive_count() > 0) {
        lane.tracker->advance(apply_filter(crop, lane.kind));
      }
    }
  }

  for (std::size_t ci = 0; ci < outcomes.size(); ++ci) {
    ConfigOutcome& o = outcomes[ci];
    if (o.failure) continue;
    const FilterLane& lane = lane_of(o.config.filter);
    std::vector<TrackSeries> mine;
    for (std::size_t idx : members[ci]) mine.push_back(lane.tracker->tracks()[idx]);
    try {
      check_collapse(mine, n);
      std::erase_if(mine, [&](const TrackSeries& s) { return s.length() != n; });
      o.estimate_bpm = estimate_rate(mine, source.fps(), settings);
    } catch (const Error& e) {
      fail(o, e);
    }
  }
  return outcomes;
}

double run_config(const SubjectRecord& record, const PipelineConfig& config,
                  const Settings& settings) {
  const DirectorySource source(record.frames_dir, record.fps);
  const std::array<PipelineConfig, 1> one = {config};
  const auto outcome = evaluate_clip(source, record.face_box, one, settings).front();
  if (outcome.failure) throw Error(*outcome.failure, outcome.message);
  return *outcome.estimate_bpm;
}

}  // namespace respicam
