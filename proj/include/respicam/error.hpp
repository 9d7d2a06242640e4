#ifndef RESPICAM_ERROR_HPP
#define RESPICAM_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace respicam {

enum class ErrorCode {
  NoFrames,
  DimensionMismatch,
  DecodeError,
  OutOfBounds,
  RoiTooSmall,
  ImageTooSmall,
  BadWindow,
  NoCorners,
  TrackingCollapse,
  PreconditionViolation,
  NoTracks,
  LengthMismatch,
  BadCutoff,
  ConstantSignal,
  BadSpec,
  WriteError,
  NoData,
  ManifestError,
  ConfigError,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// callers (the matrix runner in particular) can record it and continue.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), detail_(what) {}

  ErrorCode code() const noexcept { return code_; }
  /// Message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace respicam

#endif  // RESPICAM_ERROR_HPP
