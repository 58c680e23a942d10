#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace airsig {

enum class ErrorCode {
  InsufficientData,
  MalformedTrace,
  InvalidWindow,
  InvalidLength,
  InvalidArgument,
  MissingSensor,
  MissingGroundTruth,
  EmptySequence,
  EmptyEnrollment,
  NonUnitQuaternion,
  LengthMismatch,
  InvalidCutoff,
  DegenerateGeometry,
  ParseError,
  MissingManifest,
  IoError,
  EmptyScores,
  MissingArtifact,
  MissingEmbedding,
  DimensionMismatch,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so that
// callers (and the CLI exit-code mapping) can branch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace airsig
