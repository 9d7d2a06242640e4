#ifndef RESPICAM_BENCH_HPP
#define RESPICAM_BENCH_HPP

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "respicam/manifest.hpp"
#include "respicam/pipeline.hpp"
#include "respicam/settings.hpp"

namespace respicam {

struct Metrics {
  double mae = 0.0;
  double rmse = 0.0;
  double sd = 0.0;  // population standard deviation of signed errors
};

/// Errors are estimate - gt. Throws NoData on empty input.
Metrics compute_metrics(std::span<const std::pair<double, double>> estimate_gt);

struct SubjectResult {
  std::string subject_id;
  Condition condition = Condition::Static;
  PipelineConfig config;
  std::optional<double> estimate_bpm;
  double gt_bpm = 0.0;
  std::optional<ErrorCode> failure;
  std::string message;
};

struct MetricsRow {
  PipelineConfig config;
  std::optional<Metrics> metrics;  // empty when every subject failed
  int n_subjects = 0;
  int n_failed = 0;
};

struct ReportTable {
  std::vector<SubjectResult> subjects;  // sorted by subject id, then config order
  std::map<Condition, std::vector<MetricsRow>> rows;
};

using ProgressFn = std::function<void(const SubjectRecord&, std::size_t done, std::size_t total)>;

/// Evaluates `configs` for every record. Clip-level errors mark all of that
/// subject's configs as failed; nothing aborts the sweep.
ReportTable evaluate_records(const std::vector<SubjectRecord>& records, const Settings& settings,
                             std::span<const PipelineConfig> configs, const ProgressFn& progress = {});

/// One row per config over the results of `condition`, in `configs` order.
std::vector<MetricsRow> summarize(std::span<const SubjectResult> results, Condition condition,
                                  std::span<const PipelineConfig> configs);

void write_metrics_csv(std::ostream& out, std::span<const MetricsRow> rows);
void write_subjects_csv(std::ostream& out, std::span<const SubjectResult> results);

/// Typeset-style lines such as "Harris - SOBM, 0.96, 1.49, 1.48".
std::string format_table(std::span<const MetricsRow> rows);

/// Reads the manifest, runs all 18 configs and writes `<condition>.csv`,
/// `<condition>_table.txt` for each condition present plus `subjects.csv`.
/// Throws ManifestError for an unreadable or empty manifest, WriteError on IO failure.
ReportTable run_matrix(const std::filesystem::path& manifest, const std::filesystem::path& out_dir,
                       const Settings& settings = {}, const ProgressFn& progress = {});

}  // namespace respicam

#endif  // RESPICAM_BENCH_HPP
