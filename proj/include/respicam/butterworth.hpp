#ifndef RESPICAM_BUTTERWORTH_HPP
#define RESPICAM_BUTTERWORTH_HPP

#include <complex>

#include <Eigen/Core>

namespace respicam {

/// Second-order sections, one per row: b0 b1 b2 a0 a1 a2 (a0 == 1).
using Sos = Eigen::Matrix<double, Eigen::Dynamic, 6, Eigen::RowMajor>;

/// Digital Butterworth band-pass of the given prototype order (2*order poles),
/// bilinear transform with pre-warped edges. Throws BadCutoff unless
/// 0 < low_hz < high_hz < fs/2 and order >= 1.
Sos butter_bandpass(int order, double low_hz, double high_hz, double fs);

/// Complex response of the cascade at `freq_hz`.
std::complex<double> sos_response(const Sos& sos, double freq_hz, double fs);

/// Steady-state section states for a unit step input, shape (sections, 2).
Eigen::Matrix<double, Eigen::Dynamic, 2, Eigen::RowMajor> sosfilt_zi(const Sos& sos);

/// Direct-form II transposed cascade. `zi` (sections x 2) is updated in place when given.
Eigen::VectorXd sosfilt(const Sos& sos, const Eigen::Ref<const Eigen::VectorXd>& x,
                        Eigen::Matrix<double, Eigen::Dynamic, 2, Eigen::RowMajor>* zi = nullptr);

/// Forward-backward filtering with odd extension of `padlen` samples on each end
/// and step-steady-state initial conditions. Output length equals input length.
Eigen::VectorXd sosfiltfilt(const Sos& sos, const Eigen::Ref<const Eigen::VectorXd>& x,
                            Eigen::Index padlen);

}  // namespace respicam

#endif  // RESPICAM_BUTTERWORTH_HPP
