#include "respicam/settings.hpp"

#include <charconv>
#include <fstream>
#include <string>

#include "respicam/error.hpp"

namespace respicam {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  s = s.substr(first, last - first + 1);
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) {
    s = s.substr(1, s.size() - 2);
  }
  return s;
}

double to_double(std::string_view key, std::string_view value) {
  try {
    std::size_t used = 0;
    const std::string text(value);
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::ConfigError, "value for " + std::string(key) + " is not a number");
}

int to_int(std::string_view key, std::string_view value) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw Error(ErrorCode::ConfigError, "value for " + std::string(key) + " is not an integer");
  }
  return v;
}

}  // namespace

void Settings::set(std::string_view key, std::string_view raw) {
  const std::string_view value = trim(raw);
  const std::string k(trim(key));
  if (k.rfind("roi.", 0) == 0) {
    const auto dot = k.find('.', 4);
    const auto size = dot == std::string::npos ? std::nullopt : parse_size_class(k.substr(4, dot - 4));
    if (size) {
      const std::string field = k.substr(dot + 1);
      RoiScale& s = roi[*size];
      if (field == "w_mul") return void(s.w_mul = to_double(k, value));
      if (field == "h_mul") return void(s.h_mul = to_double(k, value));
      if (field == "y_off_mul") return void(s.y_off_mul = to_double(k, value));
    }
  }
  if (k == "features.max_count") return void(features.max_count = to_int(k, value));
  if (k == "features.quality") return void(features.quality = to_double(k, value));
  if (k == "features.min_dist") return void(features.min_dist = to_double(k, value));
  if (k == "features.harris_k") return void(features.harris_k = to_double(k, value));
  if (k == "flow.window") return void(flow.window = to_int(k, value));
  if (k == "flow.levels") return void(flow.pyramid_levels = to_int(k, value));
  if (k == "flow.iters") return void(flow.max_iters = to_int(k, value));
  if (k == "flow.eps") return void(flow.eps = to_double(k, value));
  if (k == "flow.min_eig") return void(flow.min_eig_threshold = to_double(k, value));
  if (k == "signal.low_hz") return void(band.low_hz = to_double(k, value));
  if (k == "signal.high_hz") return void(band.high_hz = to_double(k, value));
  if (k == "signal.order") return void(band.order = to_int(k, value));
  if (k == "signal.trim_fraction") return void(trim_fraction = to_double(k, value));
  if (k == "signal.min_prominence") return void(min_prominence = to_double(k, value));
  if (k == "track.margin") return void(track_margin = to_double(k, value));
  throw Error(ErrorCode::ConfigError, "unknown setting '" + k + "'");
}

void Settings::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorCode::ConfigError, what);
  };
  for (SizeClass size : kAllSizeClasses) {
    const RoiScale& s = roi[size];
    require(s.w_mul > 0.0 && s.h_mul > 0.0, "roi multipliers must be positive");
  }
  require(features.max_count >= 1, "features.max_count must be at least 1");
  require(features.quality > 0.0 && features.quality < 1.0, "features.quality must lie in (0, 1)");
  require(features.min_dist >= 0.0, "features.min_dist must be non-negative");
  require(features.window >= 1 && features.window % 2 == 1, "features window must be odd");
  try {
    flow.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::ConfigError, e.detail());
  }
  require(band.low_hz > 0.0 && band.low_hz < band.high_hz, "signal band needs 0 < low_hz < high_hz");
  require(band.order >= 1, "signal.order must be at least 1");
  require(trim_fraction > 0.0 && trim_fraction < 0.5, "signal.trim_fraction must lie in (0, 0.5)");
  require(min_prominence >= 0.0, "signal.min_prominence must be non-negative");
  require(track_margin >= 0.0, "track.margin must be non-negative");
}

void Settings::apply_assignment(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw Error(ErrorCode::ConfigError, "expected key=value, got '" + std::string(assignment) + "'");
  }
  set(assignment.substr(0, eq), assignment.substr(eq + 1));
}

void Settings::apply_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot open config file " + path.string());
  std::string line;
  std::string section;
  while (std::getline(in, line)) {
    std::string_view text(line);
    if (const auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
    text = trim(text);
    if (text.empty()) continue;
    if (text.front() == '[' && text.back() == ']') {
      section = std::string(trim(text.substr(1, text.size() - 2)));
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::ConfigError, "expected key = value, got '" + std::string(text) + "'");
    }
    const std::string key = section.empty() ? std::string(trim(text.substr(0, eq)))
                                            : section + "." + std::string(trim(text.substr(0, eq)));
    set(key, text.substr(eq + 1));
  }
}

}  // namespace respicam
