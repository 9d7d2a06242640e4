#include "respicam/manifest.hpp"

#include <fstream>

#include <json.hpp>

#include "respicam/error.hpp"

namespace respicam {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::string_view to_string(Condition c) { return c == Condition::Static ? "static" : "dynamic"; }

std::optional<Condition> parse_condition(std::string_view name) {
  if (name == "static") return Condition::Static;
  if (name == "dynamic") return Condition::Dynamic;
  return std::nullopt;
}

namespace {

SubjectRecord parse_record(const ordered_json& j, const fs::path& base) {
  SubjectRecord r;
  r.id = j.at("id").get<std::string>();
  r.frames_dir = fs::path(j.at("frames_dir").get<std::string>());
  if (r.frames_dir.is_relative()) r.frames_dir = base / r.frames_dir;
  r.fps = j.at("fps").get<double>();
  const auto& box = j.at("face_box");
  if (!box.is_array() || box.size() != 4) throw Error(ErrorCode::ManifestError, "face_box must be [x,y,w,h]");
  r.face_box = {box[0].get<int>(), box[1].get<int>(), box[2].get<int>(), box[3].get<int>()};
  r.gt_rr_bpm = j.at("gt_rr_bpm").get<double>();
  const auto cond = parse_condition(j.at("condition").get<std::string>());
  if (!cond) throw Error(ErrorCode::ManifestError, "condition must be static or dynamic");
  r.condition = *cond;
  if (r.id.empty()) throw Error(ErrorCode::ManifestError, "subject id is empty");
  if (!(r.fps > 0.0)) throw Error(ErrorCode::ManifestError, "fps must be positive for " + r.id);
  if (!(r.gt_rr_bpm > 0.0)) throw Error(ErrorCode::ManifestError, "gt_rr_bpm must be positive for " + r.id);
  if (r.face_box.w <= 0 || r.face_box.h <= 0) {
    throw Error(ErrorCode::ManifestError, "face_box must have positive size for " + r.id);
  }
  return r;
}

}  // namespace

std::vector<SubjectRecord> read_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ManifestError, "cannot open manifest " + path.string());
  ordered_json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ManifestError, std::string("malformed manifest: ") + e.what());
  }
  if (!doc.is_array()) throw Error(ErrorCode::ManifestError, "manifest must be a JSON array");
  const fs::path base = path.parent_path();
  std::vector<SubjectRecord> out;
  out.reserve(doc.size());
  for (const auto& item : doc) {
    try {
      out.push_back(parse_record(item, base));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::ManifestError, std::string("bad subject entry: ") + e.what());
    }
  }
  return out;
}

void write_manifest(const fs::path& path, const std::vector<SubjectRecord>& records) {
  ordered_json doc = ordered_json::array();
  for (const SubjectRecord& r : records) {
    ordered_json j;
    j["id"] = r.id;
    j["frames_dir"] = r.frames_dir.generic_string();
    j["fps"] = r.fps;
    j["face_box"] = {r.face_box.x, r.face_box.y, r.face_box.w, r.face_box.h};
    j["gt_rr_bpm"] = r.gt_rr_bpm;
    j["condition"] = std::string(to_string(r.condition));
    doc.push_back(std::move(j));
  }
  std::ofstream out(path);
  out << doc.dump(2) << '\n';
  if (!out) throw Error(ErrorCode::WriteError, "cannot write manifest " + path.string());
}

}  // namespace respicam
