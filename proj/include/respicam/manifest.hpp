#ifndef RESPICAM_MANIFEST_HPP
#define RESPICAM_MANIFEST_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "respicam/roi.hpp"

namespace respicam {

enum class Condition { Static, Dynamic };

std::string_view to_string(Condition c);
std::optional<Condition> parse_condition(std::string_view name);

/// One recorded clip with its face box and reference rate.
struct SubjectRecord {
  std::string id;
  std::filesystem::path frames_dir;
  double fps = 30.0;
  BoundingBox face_box;
  double gt_rr_bpm = 0.0;
  Condition condition = Condition::Static;
};

/// Parses a JSON array of subject objects. Relative `frames_dir` entries are
/// resolved against the manifest's directory. Throws ManifestError.
std::vector<SubjectRecord> read_manifest(const std::filesystem::path& path);

/// Writes records as given (paths are not rewritten). Throws WriteError.
void write_manifest(const std::filesystem::path& path, const std::vector<SubjectRecord>& records);

}  // namespace respicam

#endif  // RESPICAM_MANIFEST_HPP
