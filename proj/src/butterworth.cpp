#include "respicam/butterworth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "respicam/error.hpp"

namespace respicam {

using cplx = std::complex<double>;
using ZiMatrix = Eigen::Matrix<double, Eigen::Dynamic, 2, Eigen::RowMajor>;

Sos butter_bandpass(int order, double low_hz, double high_hz, double fs) {
  if (order < 1 || !(fs > 0.0) || !(low_hz > 0.0) || !(low_hz < high_hz) ||
      !(high_hz < 0.5 * fs)) {
    throw Error(ErrorCode::BadCutoff, "band-pass needs 0 < low < high < fs/2 and order >= 1");
  }
  const double pi = std::numbers::pi;
  const double fs2 = 2.0 * fs;
  const double w_low = fs2 * std::tan(pi * low_hz / fs);
  const double w_high = fs2 * std::tan(pi * high_hz / fs);
  const double bw = w_high - w_low;
  const double w0 = std::sqrt(w_low * w_high);

  // Analog low-pass prototype poles on the left half of the unit circle,
  // mapped to band-pass then through the bilinear transform.
  std::vector<cplx> poles;
  poles.reserve(2 * static_cast<std::size_t>(order));
  cplx denom = 1.0;
  for (int m = -order + 1; m < order; m += 2) {
    const cplx proto = -std::exp(cplx(0.0, pi * m / (2.0 * order)));
    const cplx scaled = proto * (bw / 2.0);
    const cplx root = std::sqrt(scaled * scaled - w0 * w0);
    for (const cplx s : {scaled + root, scaled - root}) {
      poles.push_back((fs2 + s) / (fs2 - s));
      denom *= fs2 - s;
    }
  }
  // Band-pass zeros: `order` at s = 0 (z = 1) and `order` at infinity (z = -1).
  const double gain = (std::pow(bw * fs2, order) / denom).real();

  // Conjugate pairs first, then leftover real poles paired in sorted order.
  std::vector<cplx> upper;
  std::vector<double> reals;
  for (const cplx& p : poles) {
    if (std::abs(p.imag()) <= 1e-12 * std::abs(p)) {
      reals.push_back(p.real());
    } else if (p.imag() > 0.0) {
      upper.push_back(p);
    }
  }
  std::sort(reals.begin(), reals.end());
  std::sort(upper.begin(), upper.end(),
            [](const cplx& a, const cplx& b) { return std::abs(a) < std::abs(b); });

  Sos sos(order, 6);
  Eigen::Index row = 0;
  auto emit = [&](double a1, double a2) {
    sos.row(row++) << 1.0, 0.0, -1.0, 1.0, a1, a2;
  };
  for (std::size_t i = 0; i + 1 < reals.size(); i += 2) {
    emit(-(reals[i] + reals[i + 1]), reals[i] * reals[i + 1]);
  }
  for (const cplx& p : upper) emit(-2.0 * p.real(), std::norm(p));
  if (row != order) throw Error(ErrorCode::BadCutoff, "unexpected pole layout in filter design");
  sos.row(0).head<3>() *= gain;
  return sos;
}

std::complex<double> sos_response(const Sos& sos, double freq_hz, double fs) {
  const cplx z1 = std::exp(cplx(0.0, -2.0 * std::numbers::pi * freq_hz / fs));
  const cplx z2 = z1 * z1;
  cplx h = 1.0;
  for (Eigen::Index s = 0; s < sos.rows(); ++s) {
    h *= (sos(s, 0) + sos(s, 1) * z1 + sos(s, 2) * z2) / (sos(s, 3) + sos(s, 4) * z1 + sos(s, 5) * z2);
  }
  return h;
}

ZiMatrix sosfilt_zi(const Sos& sos) {
  ZiMatrix zi(sos.rows(), 2);
  double scale = 1.0;
  for (Eigen::Index s = 0; s < sos.rows(); ++s) {
    const double b0 = sos(s, 0), b1 = sos(s, 1), b2 = sos(s, 2);
    const double a1 = sos(s, 4), a2 = sos(s, 5);
    const double g = (b0 + b1 + b2) / (1.0 + a1 + a2);
    zi(s, 0) = scale * (b1 + b2 - (a1 + a2) * g);
    zi(s, 1) = scale * (b2 - a2 * g);
    scale *= g;
  }
  return zi;
}

Eigen::VectorXd sosfilt(const Sos& sos, const Eigen::Ref<const Eigen::VectorXd>& x, ZiMatrix* zi) {
  ZiMatrix state = zi ? *zi : ZiMatrix::Zero(sos.rows(), 2);
  Eigen::VectorXd y = x;
  for (Eigen::Index s = 0; s < sos.rows(); ++s) {
    const double b0 = sos(s, 0), b1 = sos(s, 1), b2 = sos(s, 2);
    const double a1 = sos(s, 4), a2 = sos(s, 5);
    double z1 = state(s, 0);
    double z2 = state(s, 1);
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      const double in = y(i);
      const double out = b0 * in + z1;
      z1 = b1 * in - a1 * out + z2;
      z2 = b2 * in - a2 * out;
      y(i) = out;
    }
    state(s, 0) = z1;
    state(s, 1) = z2;
  }
  if (zi) *zi = state;
  return y;
}

Eigen::VectorXd sosfiltfilt(const Sos& sos, const Eigen::Ref<const Eigen::VectorXd>& x,
                            Eigen::Index padlen) {
  const Eigen::Index n = x.size();
  if (n == 0) return x;
  padlen = std::clamp<Eigen::Index>(padlen, 0, n - 1);
  Eigen::VectorXd ext(n + 2 * padlen);
  ext.segment(padlen, n) = x;
  for (Eigen::Index i = 1; i <= padlen; ++i) {
    ext(padlen - i) = 2.0 * x(0) - x(i);
    ext(padlen + n - 1 + i) = 2.0 * x(n - 1) - x(n - 1 - i);
  }
  const ZiMatrix zi = sosfilt_zi(sos);
  ZiMatrix state = zi * ext(0);
  Eigen::VectorXd fwd = sosfilt(sos, ext, &state);
  Eigen::VectorXd rev = fwd.reverse();
  state = zi * rev(0);
  Eigen::VectorXd back = sosfilt(sos, rev, &state);
  return back.reverse().segment(padlen, n);
}

}  // namespace respicam
