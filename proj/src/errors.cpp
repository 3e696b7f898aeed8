#include "prosody/errors.hpp"

namespace prosody {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedLine: return "MalformedLine";
    case ErrorCode::NonMonotonicTimes: return "NonMonotonicTimes";
    case ErrorCode::WindowTooShort: return "WindowTooShort";
    case ErrorCode::AudioTooShort: return "AudioTooShort";
    case ErrorCode::NoVoicedFrames: return "NoVoicedFrames";
    case ErrorCode::EvenWindow: return "EvenWindow";
    case ErrorCode::EmptyTrack: return "EmptyTrack";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::RangeTooNarrow: return "RangeTooNarrow";
    case ErrorCode::NonPositiveF0: return "NonPositiveF0";
    case ErrorCode::NegativeSemitone: return "NegativeSemitone";
    case ErrorCode::NonPositiveScale: return "NonPositiveScale";
    case ErrorCode::NonFiniteInput: return "NonFiniteInput";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::BadArgument: return "BadArgument";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
      code_(code) {}

}  // namespace prosody
