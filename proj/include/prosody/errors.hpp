#pragma once

#include <stdexcept>
#include <string>

namespace prosody {

enum class ErrorCode {
  // label file parsing
  MalformedLine,
  NonMonotonicTimes,
  // pitch extraction
  WindowTooShort,
  AudioTooShort,
  NoVoicedFrames,
  EvenWindow,
  // feature aggregation
  EmptyTrack,
  // clustering
  TooFewPoints,
  RangeTooNarrow,
  // note discretization
  NonPositiveF0,
  NegativeSemitone,
  // attention kernel
  NonPositiveScale,
  NonFiniteInput,
  DimensionMismatch,
  // I/O and configuration
  EmptyCorpus,
  IoError,
  BadArgument,
};

const char* error_code_name(ErrorCode code);

// Exception carrying a machine-checkable code next to the human-readable
// message. Everything thrown by this library is an Error; std::logic_error
// is reserved for internal invariant violations.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace prosody
