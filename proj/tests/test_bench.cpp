#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include "respicam/bench.hpp"
#include "respicam/error.hpp"
#include "respicam/synthgen.hpp"
#include "support.hpp"

using namespace respicam;
namespace fs = std::filesystem;

namespace {

using Pairs = std::vector<std::pair<double, double>>;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

// Six short clips, half of them drifting; returns the manifest path.
fs::path six_subjects(const fs::path& dir) {
  std::vector<SynthSpec> specs;
  const double rates[] = {9.0, 12.0, 15.0, 18.0, 21.0, 24.0};
  for (int i = 0; i < 6; ++i) {
    SynthSpec s;
    s.rr_bpm = rates[i];
    s.duration_s = 12.0;
    s.noise_sigma = 1.0;
    s.texture_seed = static_cast<std::uint64_t>(40 + i);
    s.drift_px_per_s = i % 2 ? 0.5 : 0.0;
    specs.push_back(s);
  }
  synth_manifest(specs, dir);
  return dir / "manifest.json";
}

}  // namespace

TEST_CASE("metrics examples") {
  const Pairs a = {{10, 11}, {12, 11}};
  Metrics m = compute_metrics(a);
  CHECK(m.mae == doctest::Approx(1.0));
  CHECK(m.rmse == doctest::Approx(1.0));
  CHECK(m.sd == doctest::Approx(1.0));

  const Pairs perfect = {{10, 10}, {12, 12}};
  m = compute_metrics(perfect);
  CHECK(m.mae == 0.0);
  CHECK(m.rmse == 0.0);
  CHECK(m.sd == 0.0);

  const Pairs b = {{10, 11}, {14, 11}};
  m = compute_metrics(b);
  CHECK(m.mae == doctest::Approx(2.0));
  CHECK(m.rmse == doctest::Approx(std::sqrt(5.0)));
  // Signed errors -1 and +3 spread 2 either side of their mean.
  CHECK(m.sd == doctest::Approx(2.0));

  try {
    compute_metrics(Pairs{});
    FAIL("expected NoData");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoData);
  }
}

TEST_CASE("metrics agree with a direct evaluation and obey Jensen") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(5.0, 30.0);
  for (int trial = 0; trial < 100; ++trial) {
    Pairs p(static_cast<std::size_t>(1 + trial % 13));
    for (auto& [e, g] : p) {
      e = u(rng);
      g = u(rng);
    }
    double abs_sum = 0, sq_sum = 0, sum = 0;
    for (const auto& [e, g] : p) {
      abs_sum += std::abs(e - g);
      sq_sum += (e - g) * (e - g);
      sum += e - g;
    }
    const double n = static_cast<double>(p.size());
    const double mean = sum / n;
    double var = 0;
    for (const auto& [e, g] : p) var += (e - g - mean) * (e - g - mean);
    const Metrics m = compute_metrics(p);
    CHECK(m.mae == doctest::Approx(abs_sum / n).epsilon(1e-12));
    CHECK(m.rmse == doctest::Approx(std::sqrt(sq_sum / n)).epsilon(1e-12));
    CHECK(m.sd == doctest::Approx(std::sqrt(var / n)).epsilon(1e-12));
    CHECK(m.rmse >= m.mae - 1e-12);
    CHECK(m.mae >= 0.0);

    std::shuffle(p.begin(), p.end(), rng);
    const Metrics s = compute_metrics(p);
    CHECK(s.mae == doctest::Approx(m.mae).epsilon(1e-12));
    CHECK(s.rmse == doctest::Approx(m.rmse).epsilon(1e-12));
  }
}

TEST_CASE("table lines use the METHOD, MAE, RMSE, SD layout") {
  MetricsRow row;
  row.config = {FilterKind::Sobel, SizeClass::Medium, DetectorKind::Harris};
  row.metrics = Metrics{0.96, 1.49, 1.48};
  row.n_subjects = 67;
  MetricsRow empty;
  empty.config = {FilterKind::None, SizeClass::Large, DetectorKind::ShiTomasi};
  empty.n_failed = 3;
  const std::vector<MetricsRow> rows = {row, empty};
  const auto text = lines(format_table(rows));
  REQUIRE(text.size() == 3);
  CHECK(text[0] == "METHOD, MAE, RMSE, SD");
  CHECK(text[1] == "Harris - SOBM, 0.96, 1.49, 1.48");
  CHECK(text[2] == "ShiTomasi - FLBL, -, -, -");

  std::ostringstream csv;
  write_metrics_csv(csv, rows);
  const auto c = lines(csv.str());
  REQUIRE(c.size() == 3);
  CHECK(c[0] == "method,detector,filter,bbox,mae,rmse,sd,n_subjects,n_failed");
  CHECK(c[1] == "SOBM,Harris,Sobel,Medium,0.9600,1.4900,1.4800,67,0");
  CHECK(c[2] == "FLBL,ShiTomasi,Filterless,Large,,,,0,3");
}

TEST_CASE("subject rows carry failures as empty fields") {
  SubjectResult ok;
  ok.subject_id = "s1";
  ok.config = {FilterKind::Laplacian, SizeClass::Small, DetectorKind::Harris};
  ok.estimate_bpm = 13.0;
  ok.gt_bpm = 12.0;
  SubjectResult bad = ok;
  bad.subject_id = "s2";
  bad.condition = Condition::Dynamic;
  bad.estimate_bpm.reset();
  bad.failure = ErrorCode::NoCorners;
  const std::vector<SubjectResult> rs = {ok, bad};
  std::ostringstream out;
  write_subjects_csv(out, rs);
  const auto c = lines(out.str());
  REQUIRE(c.size() == 3);
  CHECK(c[0] == "subject_id,condition,method,estimate_bpm,gt_bpm,error_bpm");
  CHECK(c[1] == "s1,static,Harris - LPBS,13.0000,12.0000,1.0000");
  CHECK(c[2] == "s2,dynamic,Harris - LPBS,,12.0000,");

  const auto rows = summarize(rs, Condition::Dynamic, std::vector<PipelineConfig>{ok.config});
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].n_subjects == 0);
  CHECK(rows[0].n_failed == 1);
  CHECK_FALSE(rows[0].metrics);
}

TEST_CASE("matrix over six subjects") {
  testing::TempDir dir("bench");
  const fs::path manifest = six_subjects(dir.path() / "clips");
  const ReportTable table = run_matrix(manifest, dir.path() / "out1");
  REQUIRE(table.rows.size() == 2);
  for (const auto& [cond, rows] : table.rows) {
    REQUIRE(rows.size() == 18);
    for (const MetricsRow& r : rows) {
      CHECK(r.n_subjects + r.n_failed == 3);
      if (r.metrics) CHECK(r.metrics->rmse >= r.metrics->mae);
    }
  }
  CHECK(table.subjects.size() == 6 * 18);
  for (const char* name : {"static.csv", "dynamic.csv", "static_table.txt", "dynamic_table.txt",
                           "subjects.csv"}) {
    CHECK(fs::exists(dir.path() / "out1" / name));
  }
  CHECK(lines(slurp(dir.path() / "out1" / "static.csv")).size() == 19);
  CHECK(lines(slurp(dir.path() / "out1" / "subjects.csv")).size() == 1 + 6 * 18);

  // Determinism: a second run writes identical bytes.
  run_matrix(manifest, dir.path() / "out2");
  for (const char* name : {"static.csv", "dynamic.csv", "subjects.csv", "static_table.txt"}) {
    CHECK(slurp(dir.path() / "out1" / name) == slurp(dir.path() / "out2" / name));
  }

  // Permutation invariance: reversed subject order, same reports.
  auto recs = read_manifest(manifest);
  std::reverse(recs.begin(), recs.end());
  write_manifest(dir.path() / "reversed.json", recs);
  run_matrix(dir.path() / "reversed.json", dir.path() / "out3");
  for (const char* name : {"static.csv", "dynamic.csv", "subjects.csv"}) {
    CHECK(slurp(dir.path() / "out1" / name) == slurp(dir.path() / "out3" / name));
  }
}

TEST_CASE("only conditions present get tables") {
  testing::TempDir dir("bench_static");
  SynthSpec s;
  s.rr_bpm = 15.0;
  s.duration_s = 10.0;
  synth_manifest({s}, dir.path() / "clips");
  const ReportTable table = run_matrix(dir.path() / "clips" / "manifest.json", dir.path() / "out");
  CHECK(table.rows.size() == 1);
  CHECK(table.rows.count(Condition::Static) == 1);
  CHECK_FALSE(fs::exists(dir.path() / "out" / "dynamic.csv"));
}

TEST_CASE("manifest problems") {
  testing::TempDir dir("bench_bad");
  auto code_of = [](const fs::path& m, const fs::path& out) {
    try {
      run_matrix(m, out);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::NoData;
  };
  std::ofstream(dir.path() / "empty.json") << "[]";
  CHECK(code_of(dir.path() / "empty.json", dir.path() / "o") == ErrorCode::ManifestError);
  CHECK(code_of(dir.path() / "missing.json", dir.path() / "o") == ErrorCode::ManifestError);
  std::ofstream(dir.path() / "garbage.json") << "{not json";
  CHECK(code_of(dir.path() / "garbage.json", dir.path() / "o") == ErrorCode::ManifestError);
  std::ofstream(dir.path() / "nokey.json") << R"([{"id": "a", "fps": 30}])";
  CHECK(code_of(dir.path() / "nokey.json", dir.path() / "o") == ErrorCode::ManifestError);
}

TEST_CASE("a subject with unreadable frames fails without stopping the sweep") {
  testing::TempDir dir("bench_mixed");
  SynthSpec s;
  s.rr_bpm = 12.0;
  s.duration_s = 10.0;
  auto recs = synth_manifest({s}, dir.path());
  recs.front().frames_dir = dir.path() / recs.front().frames_dir;
  SubjectRecord ghost = recs.front();
  ghost.id = "ghost";
  ghost.frames_dir = dir.path() / "nowhere";
  recs.push_back(ghost);
  const std::vector<PipelineConfig> configs = {all_configs().front()};
  const ReportTable table = evaluate_records(recs, Settings{}, configs);
  REQUIRE(table.subjects.size() == 2);
  CHECK(table.subjects[0].subject_id == "ghost");
  REQUIRE(table.subjects[0].failure);
  CHECK(*table.subjects[0].failure == ErrorCode::NoFrames);
  CHECK(table.subjects[1].estimate_bpm);
  const auto& rows = table.rows.at(Condition::Static);
  CHECK(rows[0].n_subjects == 1);
  CHECK(rows[0].n_failed == 1);
}
