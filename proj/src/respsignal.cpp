#include "respicam/respsignal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "respicam/butterworth.hpp"
#include "respicam/error.hpp"

namespace respicam {

PeakParams PeakParams::for_band(double fs, double high_hz, double min_prominence) {
  PeakParams p;
  p.min_distance = std::max<Eigen::Index>(1, static_cast<Eigen::Index>(std::floor(fs / high_hz)));
  p.min_prominence = min_prominence;
  return p;
}

double y_variance(const TrackSeries& track) {
  if (track.y.empty()) return 0.0;
  const Eigen::Map<const Eigen::ArrayXd> y(track.y.data(), static_cast<Eigen::Index>(track.y.size()));
  return (y - y.mean()).square().mean();
}

std::vector<TrackSeries> variance_trim(std::span<const TrackSeries> tracks, double fraction) {
  if (tracks.empty()) throw Error(ErrorCode::NoTracks, "no tracks to trim");
  if (!(fraction > 0.0 && fraction < 0.5)) {
    throw Error(ErrorCode::PreconditionViolation, "trim fraction must lie in (0, 0.5)");
  }
  const std::size_t n = tracks.size();
  std::vector<double> var(n);
  std::transform(tracks.begin(), tracks.end(), var.begin(), y_variance);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return var[a] < var[b]; });

  const auto drop = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n)));
  std::vector<std::size_t> keep;
  if (2 * drop < n) {
    keep.assign(order.begin() + static_cast<std::ptrdiff_t>(drop),
                order.end() - static_cast<std::ptrdiff_t>(drop));
  } else {
    keep.push_back(order[(n - 1) / 2]);
  }
  std::sort(keep.begin(), keep.end());
  std::vector<TrackSeries> out;
  out.reserve(keep.size());
  for (std::size_t i : keep) out.push_back(tracks[i]);
  return out;
}

MotionSignal aggregate_motion(std::span<const TrackSeries> tracks, double fs) {
  if (tracks.empty()) throw Error(ErrorCode::NoTracks, "no tracks to aggregate");
  const std::size_t len = tracks.front().length();
  for (const TrackSeries& t : tracks) {
    if (t.length() != len || t.x.size() != len) {
      throw Error(ErrorCode::LengthMismatch, "tracks differ in length");
    }
  }
  MotionSignal sig;
  sig.fs = fs;
  sig.values = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(len));
  for (const TrackSeries& t : tracks) {
    const Eigen::Map<const Eigen::VectorXd> y(t.y.data(), static_cast<Eigen::Index>(len));
    sig.values += (y.array() - t.y.front()).matrix();
  }
  sig.values /= static_cast<double>(tracks.size());
  return sig;
}

MotionSignal bandpass(const MotionSignal& sig, const BandpassSpec& spec) {
  const Sos sos = butter_bandpass(spec.order, spec.low_hz, spec.high_hz, sig.fs);
  // Three periods of the low edge: long enough for the slowest section to settle.
  const auto padlen = static_cast<Eigen::Index>(std::ceil(3.0 * sig.fs / spec.low_hz));
  return {sosfiltfilt(sos, sig.values, padlen), sig.fs};
}

MotionSignal z_normalize(const MotionSignal& sig) {
  if (sig.size() < 2) throw Error(ErrorCode::PreconditionViolation, "need at least two samples");
  const double mean = sig.values.mean();
  const Eigen::VectorXd centered = sig.values.array() - mean;
  const double sd = std::sqrt(centered.squaredNorm() / static_cast<double>(sig.size()));
  const double scale = std::max(1.0, sig.values.cwiseAbs().maxCoeff());
  if (!(sd > 1e-12 * scale)) throw Error(ErrorCode::ConstantSignal, "signal has zero variance");
  return {centered / sd, sig.fs};
}

double peak_prominence(const Eigen::Ref<const Eigen::VectorXd>& v, Eigen::Index index) {
  const double height = v(index);
  double left_min = height;
  for (Eigen::Index k = index - 1; k >= 0 && v(k) <= height; --k) left_min = std::min(left_min, v(k));
  double right_min = height;
  for (Eigen::Index k = index + 1; k < v.size() && v(k) <= height; ++k) {
    right_min = std::min(right_min, v(k));
  }
  return height - std::max(left_min, right_min);
}

std::vector<Eigen::Index> detect_peaks(const MotionSignal& sig, const PeakParams& params) {
  const Eigen::VectorXd& v = sig.values;
  const Eigen::Index n = v.size();
  std::vector<Eigen::Index> candidates;
  Eigen::Index i = 1;
  while (i < n - 1) {
    if (v(i) > v(i - 1)) {
      Eigen::Index j = i;
      while (j + 1 < n && v(j + 1) == v(i)) ++j;
      if (j + 1 < n && v(j + 1) < v(i)) candidates.push_back(i);
      i = j + 1;
    } else {
      ++i;
    }
  }
  std::erase_if(candidates, [&](Eigen::Index c) {
    return peak_prominence(v, c) < params.min_prominence;
  });

  std::vector<std::size_t> by_height(candidates.size());
  std::iota(by_height.begin(), by_height.end(), 0);
  std::stable_sort(by_height.begin(), by_height.end(), [&](std::size_t a, std::size_t b) {
    return v(candidates[a]) > v(candidates[b]);
  });
  std::vector<bool> removed(candidates.size(), false);
  for (std::size_t k : by_height) {
    if (removed[k]) continue;
    for (std::size_t other = 0; other < candidates.size(); ++other) {
      if (other != k && !removed[other] &&
          std::abs(candidates[other] - candidates[k]) < params.min_distance) {
        removed[other] = true;
      }
    }
  }
  std::vector<Eigen::Index> peaks;
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    if (!removed[k]) peaks.push_back(candidates[k]);
  }
  return peaks;
}

double respiration_rate(std::span<const Eigen::Index> peaks, double duration_s) {
  if (!(duration_s > 0.0)) throw Error(ErrorCode::PreconditionViolation, "duration must be positive");
  return static_cast<double>(peaks.size()) * 60.0 / duration_s;
}

}  // namespace respicam
