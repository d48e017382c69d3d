#include "patchtrack/error.hpp"

namespace patchtrack {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DecodeError: return "DecodeError";
    case ErrorCode::EmptyRegion: return "EmptyRegion";
    case ErrorCode::RegionTooSmall: return "RegionTooSmall";
    case ErrorCode::KindMismatch: return "KindMismatch";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::MissingKind: return "MissingKind";
    case ErrorCode::MissingPosition: return "MissingPosition";
    case ErrorCode::MissingPatch: return "MissingPatch";
    case ErrorCode::MissingGroundTruth: return "MissingGroundTruth";
    case ErrorCode::FrameCountMismatch: return "FrameCountMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace patchtrack
