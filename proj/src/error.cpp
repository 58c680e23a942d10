#include "airsig/error.hpp"

namespace airsig {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::MalformedTrace: return "MalformedTrace";
    case ErrorCode::InvalidWindow: return "InvalidWindow";
    case ErrorCode::InvalidLength: return "InvalidLength";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::MissingSensor: return "MissingSensor";
    case ErrorCode::MissingGroundTruth: return "MissingGroundTruth";
    case ErrorCode::EmptySequence: return "EmptySequence";
    case ErrorCode::EmptyEnrollment: return "EmptyEnrollment";
    case ErrorCode::NonUnitQuaternion: return "NonUnitQuaternion";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::InvalidCutoff: return "InvalidCutoff";
    case ErrorCode::DegenerateGeometry: return "DegenerateGeometry";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::MissingManifest: return "MissingManifest";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::EmptyScores: return "EmptyScores";
    case ErrorCode::MissingArtifact: return "MissingArtifact";
    case ErrorCode::MissingEmbedding: return "MissingEmbedding";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace airsig
