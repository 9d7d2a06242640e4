#include "respicam/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "respicam/error.hpp"
#include "respicam/frame_io.hpp"
#include "respicam/imgproc.hpp"

namespace respicam {

namespace fs = std::filesystem;

void SynthSpec::validate() const {
  if (!(fps > 0.0) || !(rr_bpm > 0.0) || !(rr_bpm / 60.0 < fps / 2.0)) {
    throw Error(ErrorCode::BadSpec, "breathing rate must be positive and below Nyquist");
  }
  if (!(amplitude_px > 0.0) || !(duration_s > 0.0) || noise_sigma < 0.0) {
    throw Error(ErrorCode::BadSpec, "amplitude and duration must be positive, noise non-negative");
  }
  if (width < 64 || height < 64) throw Error(ErrorCode::BadSpec, "frame must be at least 64x64");
  if (frame_count() < 2) throw Error(ErrorCode::BadSpec, "clip must span at least two frames");
}

std::size_t SynthSpec::frame_count() const {
  return static_cast<std::size_t>(std::llround(duration_s * fps));
}

std::string SynthSpec::resolved_id() const {
  if (!id.empty()) return id;
  char buf[96];
  std::snprintf(buf, sizeof buf, "synth_rr%g_seed%llu", rr_bpm,
                static_cast<unsigned long long>(texture_seed));
  return buf;
}

Condition SynthSpec::resolved_condition() const {
  if (condition) return *condition;
  return drift_px_per_s != 0.0 ? Condition::Dynamic : Condition::Static;
}

namespace {

// Portable uniform in [0, 1) from the standardised mt19937_64 stream.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Blocky random field of `cell`-sized tiles smoothed twice with a 3x3 box.
FloatImage cell_texture(int rows, int cols, int cell, double lo, double hi, std::mt19937_64& rng) {
  const int grid_rows = rows / cell + 1;
  const int grid_cols = cols / cell + 1;
  FloatImage grid(grid_rows, grid_cols);
  for (Eigen::Index i = 0; i < grid.size(); ++i) grid.data()[i] = lo + (hi - lo) * uniform01(rng);
  FloatImage tex(rows, cols);
  for (int y = 0; y < rows; ++y) {
    for (int x = 0; x < cols; ++x) tex(y, x) = grid(y / cell, x / cell);
  }
  Kernel3x3 box = Kernel3x3::Constant(1.0 / 9.0);
  return convolve2d(convolve2d(tex, box), box);
}

}  // namespace

SynthScene::SynthScene(const SynthSpec& spec) : spec_(spec) {
  spec_.validate();
  const int w = spec_.width;
  const int h = spec_.height;
  const int fw = static_cast<int>(std::lround(0.2 * std::min(w, h)));
  face_box_ = {static_cast<int>(std::lround(0.5 * w - 0.5 * fw)),
               static_cast<int>(std::lround(0.04 * h)), fw, fw};
  patch_box_ = {static_cast<int>(std::lround(0.5 * w - 1.6 * fw)),
                face_box_.y + static_cast<int>(std::lround(0.8 * fw)),
                static_cast<int>(std::lround(3.2 * fw)), static_cast<int>(std::lround(2.2 * fw))};

  std::mt19937_64 rng(spec_.texture_seed);
  background_ = cell_texture(h, w, 6, 90.0, 150.0, rng);
  texture_ = cell_texture(patch_box_.h, patch_box_.w, 4, 20.0, 235.0, rng);
  ones_ = FloatImage::Ones(patch_box_.h, patch_box_.w);
}

double SynthScene::offset(std::size_t index) const {
  const double t = static_cast<double>(index) / spec_.fps;
  return spec_.amplitude_px * std::sin(2.0 * std::numbers::pi * (spec_.rr_bpm / 60.0) * t) +
         spec_.drift_px_per_s * t;
}

FloatImage SynthScene::shifted(const FloatImage& src, std::size_t index) const {
  FloatImage out = FloatImage::Zero(spec_.height, spec_.width);
  const double off = offset(index);
  // Horizontal extent of the patch inside the frame.
  const int x0 = std::max(patch_box_.x, 0);
  const int x1 = std::min(patch_box_.x + patch_box_.w, spec_.width);
  if (x1 <= x0) return out;
  const int u0 = x0 - patch_box_.x;
  const int span = x1 - x0;
  for (int y = 0; y < spec_.height; ++y) {
    const double v = y - patch_box_.y - off;
    const double fv = std::floor(v);
    const double a = v - fv;
    const auto r0 = static_cast<Eigen::Index>(fv);
    const Eigen::Index r1 = r0 + 1;
    if (r0 >= 0 && r0 < src.rows()) out.row(y).segment(x0, span) += (1.0 - a) * src.row(r0).segment(u0, span);
    if (r1 >= 0 && r1 < src.rows()) out.row(y).segment(x0, span) += a * src.row(r1).segment(u0, span);
  }
  return out;
}

FloatImage SynthScene::patch_alpha(std::size_t index) const { return shifted(ones_, index); }

FloatImage SynthScene::patch_layer(std::size_t index) const { return shifted(texture_, index); }

GrayFrame SynthScene::render(std::size_t index) const {
  // Same composite as background * (1 - patch_alpha) + patch_layer, one row
  // at a time: the alpha of a row is constant across the patch columns.
  FloatImage img = background_;
  const double off = offset(index);
  const int x0 = std::max(patch_box_.x, 0);
  const int x1 = std::min(patch_box_.x + patch_box_.w, spec_.width);
  const int u0 = x0 - patch_box_.x;
  for (int y = 0; x1 > x0 && y < spec_.height; ++y) {
    const double v = y - patch_box_.y - off;
    const double fv = std::floor(v);
    const double a = v - fv;
    const auto r0 = static_cast<Eigen::Index>(fv);
    const Eigen::Index r1 = r0 + 1;
    const bool in0 = r0 >= 0 && r0 < texture_.rows();
    const bool in1 = r1 >= 0 && r1 < texture_.rows();
    if (!in0 && !in1) continue;
    const double alpha = (in0 ? 1.0 - a : 0.0) + (in1 ? a : 0.0);
    double* row = img.data() + static_cast<Eigen::Index>(y) * spec_.width;
    const double* t0 = in0 ? texture_.data() + r0 * texture_.cols() + u0 : nullptr;
    const double* t1 = in1 ? texture_.data() + r1 * texture_.cols() + u0 : nullptr;
    for (int x = x0; x < x1; ++x) {
      double layer = 0.0;
      if (t0) layer += (1.0 - a) * t0[x - x0];
      if (t1) layer += a * t1[x - x0];
      row[x] = row[x] * (1.0 - alpha) + layer;
    }
  }
  if (spec_.noise_sigma > 0.0) {
    std::mt19937_64 rng(spec_.texture_seed * 0x9E3779B97F4A7C15ULL + index + 1);
    double* px = img.data();
    for (Eigen::Index i = 0; i < img.size(); i += 2) {
      // Marsaglia polar method, two normals per accepted draw.
      double u = 0.0;
      double v = 0.0;
      double r2 = 0.0;
      do {
        u = 2.0 * uniform01(rng) - 1.0;
        v = 2.0 * uniform01(rng) - 1.0;
        r2 = u * u + v * v;
      } while (r2 >= 1.0 || r2 == 0.0);
      const double scale = spec_.noise_sigma * std::sqrt(-2.0 * std::log(r2) / r2);
      px[i] += scale * u;
      if (i + 1 < img.size()) px[i + 1] += scale * v;
    }
  }
  GrayFrame out(img.rows(), img.cols());
  for (Eigen::Index i = 0; i < img.size(); ++i) {
    out.data()[i] = static_cast<std::uint8_t>(std::clamp(img.data()[i], 0.0, 255.0) + 0.5);
  }
  return out;
}

SynthClip synth_clip(const SynthSpec& spec) {
  const SynthScene scene(spec);
  SynthClip clip;
  clip.sequence.fps = spec.fps;
  const std::size_t n = spec.frame_count();
  clip.sequence.frames.reserve(n);
  for (std::size_t i = 0; i < n; ++i) clip.sequence.frames.push_back(scene.render(i));
  clip.face_box = scene.face_box();
  clip.gt_rr_bpm = spec.rr_bpm;
  return clip;
}

std::vector<SubjectRecord> synth_manifest(const std::vector<SynthSpec>& specs,
                                          const fs::path& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir)) {
    throw Error(ErrorCode::WriteError, "cannot create " + out_dir.string());
  }
  std::vector<SubjectRecord> records;
  for (const SynthSpec& spec : specs) {
    const SynthScene scene(spec);
    const std::string id = spec.resolved_id();
    const fs::path dir = out_dir / id;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::WriteError, "cannot create " + dir.string());
    char name[32];
    for (std::size_t i = 0; i < spec.frame_count(); ++i) {
      std::snprintf(name, sizeof name, "frame_%06zu.pgm", i);
      write_pgm(dir / name, scene.render(i));
    }
    records.push_back({id, fs::path(id), spec.fps, scene.face_box(), spec.rr_bpm,
                       spec.resolved_condition()});
  }
  write_manifest(out_dir / "manifest.json", records);
  return records;
}

}  // namespace respicam
