#ifndef RESPICAM_SETTINGS_HPP
#define RESPICAM_SETTINGS_HPP

#include <filesystem>
#include <string_view>

#include "respicam/features.hpp"
#include "respicam/respsignal.hpp"
#include "respicam/roi.hpp"
#include "respicam/tracking.hpp"

namespace respicam {

/// Every tunable of the pipeline, addressable by dotted key.
struct Settings {
  RoiGeometry roi;
  CornerParams features;
  FlowParams flow;
  BandpassSpec band;
  double trim_fraction = 1.0 / 3.0;
  double min_prominence = 0.5;
  /// Tracking region = ROI union grown by this multiple of its size on each side.
  double track_margin = 2.0;

  /// Applies one `key=value` override, e.g. `flow.window=15`. Throws ConfigError.
  void set(std::string_view key, std::string_view value);

  /// Applies `key = value` lines; `[section]` headers prefix the keys that follow,
  /// `#` starts a comment. Throws ConfigError.
  void apply_file(const std::filesystem::path& path);

  /// Parses "key=value". Throws ConfigError.
  void apply_assignment(std::string_view assignment);

  /// Throws ConfigError when any field is outside its domain.
  void validate() const;
};

}  // namespace respicam

#endif  // RESPICAM_SETTINGS_HPP
