#include <doctest.h>

#include <fstream>

#include "respicam/error.hpp"
#include "respicam/settings.hpp"
#include "support.hpp"

using namespace respicam;

namespace {

ErrorCode failure_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::NoData;
}

}  // namespace

TEST_CASE("defaults are valid") {
  const Settings s;
  CHECK_NOTHROW(s.validate());
  CHECK(s.band.low_hz == 0.1);
  CHECK(s.band.high_hz == 0.45);
  CHECK(s.band.order == 4);
  CHECK(s.min_prominence == 0.5);
  CHECK(s.trim_fraction == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("individual overrides") {
  Settings s;
  s.set("flow.window", "15");
  s.set("signal.low_hz", " 0.2 ");
  s.apply_assignment("features.harris_k=0.06");
  s.apply_assignment("roi.large.w_mul = 2.5");
  s.apply_assignment("roi.Small.y_off_mul=1.4");
  s.apply_assignment("track.margin='1.5'");
  CHECK(s.flow.window == 15);
  CHECK(s.band.low_hz == 0.2);
  CHECK(s.features.harris_k == 0.06);
  CHECK(s.roi.large.w_mul == 2.5);
  CHECK(s.roi.small.y_off_mul == 1.4);
  CHECK(s.track_margin == 1.5);
}

TEST_CASE("malformed overrides") {
  Settings s;
  CHECK(failure_of([&] { s.set("flow.windw", "15"); }) == ErrorCode::ConfigError);
  CHECK(failure_of([&] { s.set("roi.huge.w_mul", "1"); }) == ErrorCode::ConfigError);
  CHECK(failure_of([&] { s.set("flow.window", "1.5"); }) == ErrorCode::ConfigError);
  CHECK(failure_of([&] { s.set("signal.low_hz", "fast"); }) == ErrorCode::ConfigError);
  CHECK(failure_of([&] { s.apply_assignment("flow.window"); }) == ErrorCode::ConfigError);
  CHECK(s.flow.window == FlowParams{}.window);
}

TEST_CASE("settings files") {
  testing::TempDir dir("settings");
  const auto path = dir.path() / "respicam.toml";
  std::ofstream(path) << "# tuning\n"
                         "track.margin = 1.0\n"
                         "\n"
                         "[signal]\n"
                         "high_hz = 0.5   # a little wider\n"
                         "order = \"3\"\n"
                         "[roi.medium]\n"
                         "h_mul = 1.1\n";
  Settings s;
  s.apply_file(path);
  CHECK(s.track_margin == 1.0);
  CHECK(s.band.high_hz == 0.5);
  CHECK(s.band.order == 3);
  CHECK(s.roi.medium.h_mul == 1.1);

  std::ofstream(dir.path() / "bad.toml") << "[flow]\nwindow\n";
  CHECK(failure_of([&] { s.apply_file(dir.path() / "bad.toml"); }) == ErrorCode::ConfigError);
  CHECK(failure_of([&] { s.apply_file(dir.path() / "absent.toml"); }) == ErrorCode::ConfigError);
}

TEST_CASE("validation rejects out-of-domain values") {
  const char* bad[] = {"flow.window=4",          "flow.levels=0",        "features.max_count=0",
                       "features.quality=1.5",   "features.min_dist=-1", "signal.low_hz=0.5",
                       "signal.order=0",         "signal.trim_fraction=0.5",
                       "signal.min_prominence=-0.1", "track.margin=-1",  "roi.small.w_mul=0"};
  for (const char* kv : bad) {
    CAPTURE(kv);
    Settings s;
    s.apply_assignment(kv);
    CHECK(failure_of([&] { s.validate(); }) == ErrorCode::ConfigError);
  }
}
