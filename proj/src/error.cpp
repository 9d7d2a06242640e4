#include "respicam/error.hpp"

namespace respicam {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NoFrames: return "NoFrames";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DecodeError: return "DecodeError";
    case ErrorCode::OutOfBounds: return "OutOfBounds";
    case ErrorCode::RoiTooSmall: return "RoiTooSmall";
    case ErrorCode::ImageTooSmall: return "ImageTooSmall";
    case ErrorCode::BadWindow: return "BadWindow";
    case ErrorCode::NoCorners: return "NoCorners";
    case ErrorCode::TrackingCollapse: return "TrackingCollapse";
    case ErrorCode::PreconditionViolation: return "PreconditionViolation";
    case ErrorCode::NoTracks: return "NoTracks";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::BadCutoff: return "BadCutoff";
    case ErrorCode::ConstantSignal: return "ConstantSignal";
    case ErrorCode::BadSpec: return "BadSpec";
    case ErrorCode::WriteError: return "WriteError";
    case ErrorCode::NoData: return "NoData";
    case ErrorCode::ManifestError: return "ManifestError";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace respicam
