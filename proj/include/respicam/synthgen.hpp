#ifndef RESPICAM_SYNTHGEN_HPP
#define RESPICAM_SYNTHGEN_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "respicam/image.hpp"
#include "respicam/manifest.hpp"
#include "respicam/roi.hpp"

namespace respicam {

/// A textured "chest" patch breathing sinusoidally over a static textured background.
struct SynthSpec {
  double rr_bpm = 15.0;
  double amplitude_px = 2.0;
  double duration_s = 60.0;
  double fps = 30.0;
  double noise_sigma = 0.0;
  std::uint64_t texture_seed = 1;
  double drift_px_per_s = 0.0;
  int width = 160;
  int height = 160;
  std::string id;                      // empty: derived from rr and seed
  std::optional<Condition> condition;  // empty: dynamic iff drift != 0

  /// Throws BadSpec.
  void validate() const;
  std::size_t frame_count() const;
  std::string resolved_id() const;
  Condition resolved_condition() const;
};

/// Deterministic scene for one spec; frames can be rendered in any order.
class SynthScene {
 public:
  explicit SynthScene(const SynthSpec& spec);

  const SynthSpec& spec() const { return spec_; }
  const BoundingBox& face_box() const { return face_box_; }
  /// Patch rectangle at zero displacement.
  const BoundingBox& patch_box() const { return patch_box_; }
  const FloatImage& background() const { return background_; }

  /// Vertical patch displacement (px, downward positive) at frame `index`.
  double offset(std::size_t index) const;

  /// Coverage (alpha) and alpha-premultiplied intensity of the patch at frame `index`.
  FloatImage patch_alpha(std::size_t index) const;
  FloatImage patch_layer(std::size_t index) const;

  /// Composite frame with seeded per-frame Gaussian noise, rounded to 8 bits.
  GrayFrame render(std::size_t index) const;

 private:
  FloatImage shifted(const FloatImage& src, std::size_t index) const;

  SynthSpec spec_;
  BoundingBox face_box_;
  BoundingBox patch_box_;
  FloatImage background_;
  FloatImage texture_;  // patch-local intensities
  FloatImage ones_;     // patch-local unit coverage
};

struct SynthClip {
  FrameSequence sequence;
  BoundingBox face_box;
  double gt_rr_bpm = 0.0;
};

SynthClip synth_clip(const SynthSpec& spec);

/// Renders each spec to `out_dir/<id>/frame_%06d.pgm` and writes
/// `out_dir/manifest.json`. Throws WriteError.
std::vector<SubjectRecord> synth_manifest(const std::vector<SynthSpec>& specs,
                                          const std::filesystem::path& out_dir);

}  // namespace respicam

#endif  // RESPICAM_SYNTHGEN_HPP
