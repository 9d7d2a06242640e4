#ifndef RESPICAM_RESPSIGNAL_HPP
#define RESPICAM_RESPSIGNAL_HPP

#include <span>
#include <vector>

#include <Eigen/Core>

#include "respicam/tracking.hpp"

namespace respicam {

/// Uniformly sampled 1D series.
struct MotionSignal {
  Eigen::VectorXd values;
  double fs = 0.0;

  Eigen::Index size() const { return values.size(); }
  double duration_s() const { return static_cast<double>(values.size()) / fs; }
};

struct BandpassSpec {
  double low_hz = 0.1;
  double high_hz = 0.45;
  int order = 4;
};

struct PeakParams {
  Eigen::Index min_distance = 1;
  double min_prominence = 0.5;

  /// min_distance = floor(fs / high_hz), the shortest in-band period.
  static PeakParams for_band(double fs, double high_hz, double min_prominence = 0.5);
};

/// Keeps the middle band of tracks ranked by y-variance, dropping
/// floor(fraction * N) from each end; original order is preserved.
/// Throws NoTracks on empty input.
std::vector<TrackSeries> variance_trim(std::span<const TrackSeries> tracks,
                                       double fraction = 1.0 / 3.0);

/// Population variance of a track's y positions.
double y_variance(const TrackSeries& track);

/// Per-frame mean of baseline-removed y displacement. Throws LengthMismatch.
MotionSignal aggregate_motion(std::span<const TrackSeries> tracks, double fs);

/// Zero-phase Butterworth band-pass. Throws BadCutoff.
MotionSignal bandpass(const MotionSignal& sig, const BandpassSpec& spec = {});

/// (x - mean) / population std. Throws ConstantSignal.
MotionSignal z_normalize(const MotionSignal& sig);

/// Local maxima (flat tops report their left edge) with prominence at least
/// `min_prominence`, thinned so no two kept peaks are closer than
/// `min_distance` samples; taller peaks win, equal heights favour the lower index.
/// Returned in ascending index order.
std::vector<Eigen::Index> detect_peaks(const MotionSignal& sig, const PeakParams& params);

/// Topographic prominence of the peak at `index`.
double peak_prominence(const Eigen::Ref<const Eigen::VectorXd>& values, Eigen::Index index);

/// Breaths per minute from a peak count over `duration_s`.
double respiration_rate(std::span<const Eigen::Index> peaks, double duration_s);

}  // namespace respicam

#endif  // RESPICAM_RESPSIGNAL_HPP
