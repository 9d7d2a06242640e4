#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "respicam/bench.hpp"
#include "respicam/error.hpp"
#include "respicam/manifest.hpp"
#include "respicam/pipeline.hpp"
#include "respicam/settings.hpp"
#include "respicam/synthgen.hpp"

namespace fs = std::filesystem;
using namespace respicam;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitManifest = 2;
constexpr int kExitAllFailed = 3;

bool all_failed(const ReportTable& table) {
  return std::all_of(table.subjects.begin(), table.subjects.end(),
                     [](const SubjectResult& r) { return !r.estimate_bpm; });
}

void print_progress(const SubjectRecord& rec, std::size_t done, std::size_t total) {
  std::fprintf(stderr, "[%zu/%zu] %s\n", done, total, rec.id.c_str());
}

int cmd_run(const fs::path& manifest, const std::string& acronym, const std::string& detector,
            const std::string& out, const Settings& settings) {
  const auto config = parse_config(acronym, detector);
  if (!config) throw Error(ErrorCode::ConfigError, "unknown configuration " + acronym + " / " + detector);
  const std::vector<SubjectRecord> records = read_manifest(manifest);
  if (records.empty()) throw Error(ErrorCode::ManifestError, "manifest lists no subjects");
  const std::vector<PipelineConfig> configs = {*config};
  const ReportTable table = evaluate_records(records, settings, configs, print_progress);

  std::ostringstream csv;
  write_subjects_csv(csv, table.subjects);
  if (out.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream file(out, std::ios::binary);
    file << csv.str();
    if (!file) throw Error(ErrorCode::WriteError, "cannot write " + out);
  }
  for (const auto& [cond, rows] : table.rows) {
    std::cerr << to_string(cond) << ":\n" << format_table(rows);
  }
  for (const SubjectResult& r : table.subjects) {
    if (r.failure) std::cerr << r.subject_id << ": " << to_string(*r.failure) << ": " << r.message << '\n';
  }
  return all_failed(table) ? kExitAllFailed : kExitOk;
}

int cmd_matrix(const fs::path& manifest, const fs::path& out, const Settings& settings) {
  const ReportTable table = run_matrix(manifest, out, settings, print_progress);
  for (const auto& [cond, rows] : table.rows) {
    std::cout << to_string(cond) << ":\n" << format_table(rows) << '\n';
  }
  return all_failed(table) ? kExitAllFailed : kExitOk;
}

// Generated clips are added to any manifest already in `out`; an entry with
// the same id is replaced.
int cmd_synth(const SynthSpec& spec, const fs::path& out) {
  const fs::path manifest_path = out / "manifest.json";
  std::vector<SubjectRecord> existing;
  if (fs::exists(manifest_path)) existing = read_manifest(manifest_path);

  const std::vector<SubjectRecord> added = synth_manifest({spec}, out);
  std::vector<SubjectRecord> merged;
  const fs::path base = fs::absolute(out).lexically_normal();
  for (SubjectRecord rec : existing) {
    const bool replaced = std::any_of(added.begin(), added.end(),
                                      [&](const SubjectRecord& a) { return a.id == rec.id; });
    if (replaced) continue;
    const fs::path rel = fs::absolute(rec.frames_dir).lexically_normal().lexically_relative(base);
    if (!rel.empty() && *rel.begin() != "..") rec.frames_dir = rel;
    merged.push_back(std::move(rec));
  }
  merged.insert(merged.end(), added.begin(), added.end());
  write_manifest(manifest_path, merged);
  for (const SubjectRecord& rec : added) {
    std::cout << rec.id << " -> " << (out / rec.frames_dir).string() << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Respiratory rate from chest feature-point motion"};
  app.require_subcommand(1);

  std::string config_file;
  std::vector<std::string> overrides;
  app.add_option("--config-file", config_file, "key = value settings file")->check(CLI::ExistingFile);
  app.add_option("--set", overrides, "setting override key=value (repeatable)");

  std::string manifest;
  std::string acronym;
  std::string detector;
  std::string out;

  CLI::App* run = app.add_subcommand("run", "evaluate one configuration over a manifest");
  run->add_option("--manifest", manifest, "subject manifest (JSON)")->required();
  run->add_option("--config", acronym, "configuration acronym, e.g. SOBM")->required();
  run->add_option("--detector", detector, "harris or shitomasi")->required();
  run->add_option("--out", out, "per-subject CSV (default: stdout)");

  CLI::App* matrix = app.add_subcommand("matrix", "evaluate all 18 configurations");
  matrix->add_option("--manifest", manifest, "subject manifest (JSON)")->required();
  matrix->add_option("--out", out, "report directory")->required();

  SynthSpec spec;
  std::string condition;
  CLI::App* synth = app.add_subcommand("synth", "render a synthetic breathing clip");
  synth->add_option("--rr", spec.rr_bpm, "breathing rate (bpm)")->capture_default_str();
  synth->add_option("--duration", spec.duration_s, "clip length (s)")->capture_default_str();
  synth->add_option("--fps", spec.fps, "frame rate (Hz)")->capture_default_str();
  synth->add_option("--amplitude", spec.amplitude_px, "motion amplitude (px)")->capture_default_str();
  synth->add_option("--noise", spec.noise_sigma, "Gaussian noise sigma (gray levels)")->capture_default_str();
  synth->add_option("--drift", spec.drift_px_per_s, "vertical drift (px/s)")->capture_default_str();
  synth->add_option("--seed", spec.texture_seed, "texture and noise seed")->capture_default_str();
  synth->add_option("--width", spec.width, "frame width (px)")->capture_default_str();
  synth->add_option("--height", spec.height, "frame height (px)")->capture_default_str();
  synth->add_option("--id", spec.id, "subject id");
  synth->add_option("--condition", condition, "static or dynamic");
  synth->add_option("--out", out, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    Settings settings;
    if (!config_file.empty()) settings.apply_file(config_file);
    for (const std::string& kv : overrides) settings.apply_assignment(kv);
    settings.validate();

    if (run->parsed()) return cmd_run(manifest, acronym, detector, out, settings);
    if (matrix->parsed()) return cmd_matrix(manifest, out, settings);
    if (!condition.empty()) {
      spec.condition = parse_condition(condition);
      if (!spec.condition) throw Error(ErrorCode::BadSpec, "unknown condition " + condition);
    }
    return cmd_synth(spec, out);
  } catch (const Error& e) {
    std::cerr << "respicam: " << e.what() << '\n';
    return e.code() == ErrorCode::ManifestError ? kExitManifest : kExitError;
  } catch (const std::exception& e) {
    std::cerr << "respicam: " << e.what() << '\n';
    return kExitError;
  }
}
