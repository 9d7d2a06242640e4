#include "respicam/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "respicam/error.hpp"

namespace respicam {

namespace fs = std::filesystem;

Metrics compute_metrics(std::span<const std::pair<double, double>> estimate_gt) {
  if (estimate_gt.empty()) throw Error(ErrorCode::NoData, "no estimate/gt pairs");
  const auto n = static_cast<Eigen::Index>(estimate_gt.size());
  Eigen::ArrayXd err(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& [est, gt] = estimate_gt[static_cast<std::size_t>(i)];
    err(i) = est - gt;
  }
  Metrics m;
  m.mae = err.abs().mean();
  m.rmse = std::sqrt(err.square().mean());
  m.sd = std::sqrt((err - err.mean()).square().mean());
  return m;
}

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::size_t config_rank(const PipelineConfig& c, std::span<const PipelineConfig> configs) {
  return static_cast<std::size_t>(std::find(configs.begin(), configs.end(), c) - configs.begin());
}

}  // namespace

ReportTable evaluate_records(const std::vector<SubjectRecord>& records, const Settings& settings,
                             std::span<const PipelineConfig> configs, const ProgressFn& progress) {
  ReportTable table;
  std::size_t done = 0;
  for (const SubjectRecord& rec : records) {
    std::vector<ConfigOutcome> outcomes;
    try {
      const DirectorySource source(rec.frames_dir, rec.fps);
      outcomes = evaluate_clip(source, rec.face_box, configs, settings);
    } catch (const Error& e) {
      outcomes.clear();
      for (const PipelineConfig& c : configs) outcomes.push_back({c, std::nullopt, e.code(), e.detail()});
    }
    for (const ConfigOutcome& o : outcomes) {
      table.subjects.push_back(
          {rec.id, rec.condition, o.config, o.estimate_bpm, rec.gt_rr_bpm, o.failure, o.message});
    }
    if (progress) progress(rec, ++done, records.size());
  }
  std::stable_sort(table.subjects.begin(), table.subjects.end(),
                   [&](const SubjectResult& a, const SubjectResult& b) {
                     if (a.subject_id != b.subject_id) return a.subject_id < b.subject_id;
                     return config_rank(a.config, configs) < config_rank(b.config, configs);
                   });
  for (Condition cond : {Condition::Static, Condition::Dynamic}) {
    const bool present = std::any_of(records.begin(), records.end(),
                                     [&](const SubjectRecord& r) { return r.condition == cond; });
    if (present) table.rows[cond] = summarize(table.subjects, cond, configs);
  }
  return table;
}

std::vector<MetricsRow> summarize(std::span<const SubjectResult> results, Condition condition,
                                  std::span<const PipelineConfig> configs) {
  std::vector<MetricsRow> rows;
  for (const PipelineConfig& c : configs) {
    MetricsRow row;
    row.config = c;
    std::vector<std::pair<double, double>> pairs;
    for (const SubjectResult& r : results) {
      if (r.condition != condition || !(r.config == c)) continue;
      if (r.estimate_bpm) {
        pairs.emplace_back(*r.estimate_bpm, r.gt_bpm);
      } else {
        ++row.n_failed;
      }
    }
    row.n_subjects = static_cast<int>(pairs.size());
    if (!pairs.empty()) row.metrics = compute_metrics(pairs);
    rows.push_back(row);
  }
  return rows;
}

void write_metrics_csv(std::ostream& out, std::span<const MetricsRow> rows) {
  out << "method,detector,filter,bbox,mae,rmse,sd,n_subjects,n_failed\n";
  for (const MetricsRow& r : rows) {
    out << r.config.acronym() << ',' << to_string(r.config.detector) << ','
        << to_string(r.config.filter) << ',' << to_string(r.config.bbox) << ',';
    if (r.metrics) {
      out << fixed(r.metrics->mae, 4) << ',' << fixed(r.metrics->rmse, 4) << ','
          << fixed(r.metrics->sd, 4);
    } else {
      out << ",,";
    }
    out << ',' << r.n_subjects << ',' << r.n_failed << '\n';
  }
}

void write_subjects_csv(std::ostream& out, std::span<const SubjectResult> results) {
  out << "subject_id,condition,method,estimate_bpm,gt_bpm,error_bpm\n";
  for (const SubjectResult& r : results) {
    out << r.subject_id << ',' << to_string(r.condition) << ',' << r.config.method() << ',';
    if (r.estimate_bpm) out << fixed(*r.estimate_bpm, 4);
    out << ',' << fixed(r.gt_bpm, 4) << ',';
    if (r.estimate_bpm) out << fixed(*r.estimate_bpm - r.gt_bpm, 4);
    out << '\n';
  }
}

std::string format_table(std::span<const MetricsRow> rows) {
  std::ostringstream out;
  out << "METHOD, MAE, RMSE, SD\n";
  for (const MetricsRow& r : rows) {
    out << r.config.method();
    if (r.metrics) {
      out << ", " << fixed(r.metrics->mae, 2) << ", " << fixed(r.metrics->rmse, 2) << ", "
          << fixed(r.metrics->sd, 2);
    } else {
      out << ", -, -, -";
    }
    out << '\n';
  }
  return out.str();
}

namespace {

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error(ErrorCode::WriteError, "cannot write " + path.string());
}

}  // namespace

ReportTable run_matrix(const fs::path& manifest, const fs::path& out_dir, const Settings& settings,
                       const ProgressFn& progress) {
  const std::vector<SubjectRecord> records = read_manifest(manifest);
  if (records.empty()) throw Error(ErrorCode::ManifestError, "manifest lists no subjects");
  const std::vector<PipelineConfig> configs = all_configs();
  ReportTable table = evaluate_records(records, settings, configs, progress);

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir)) throw Error(ErrorCode::WriteError, "cannot create " + out_dir.string());
  for (const auto& [cond, rows] : table.rows) {
    std::ostringstream csv;
    write_metrics_csv(csv, rows);
    write_text(out_dir / (std::string(to_string(cond)) + ".csv"), csv.str());
    write_text(out_dir / (std::string(to_string(cond)) + "_table.txt"), format_table(rows));
  }
  std::ostringstream subjects;
  write_subjects_csv(subjects, table.subjects);
  write_text(out_dir / "subjects.csv", subjects.str());
  return table;
}

}  // namespace respicam
