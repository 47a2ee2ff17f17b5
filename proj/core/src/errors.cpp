#include "bnbpe/errors.hpp"

namespace bnbpe {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kTargetTooSmall: return "TargetTooSmall";
    case ErrorCode::kFingerprintMismatch: return "FingerprintMismatch";
    case ErrorCode::kVersionMismatch: return "VersionMismatch";
    case ErrorCode::kCorruptFile: return "CorruptFile";
    case ErrorCode::kMissingModel: return "MissingModel";
    case ErrorCode::kMissingColumn: return "MissingColumn";
    case ErrorCode::kMalformedRow: return "MalformedRow";
    case ErrorCode::kClassTooSmall: return "ClassTooSmall";
    case ErrorCode::kEmptyTrainingSet: return "EmptyTrainingSet";
    case ErrorCode::kSingleClass: return "SingleClass";
    case ErrorCode::kNonFinite: return "NonFinite";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kCorpusSmallerThanWarmup: return "CorpusSmallerThanWarmup";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), detail_(message) {}

}  // namespace bnbpe
