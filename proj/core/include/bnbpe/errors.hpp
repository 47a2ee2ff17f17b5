#pragma once

#include <stdexcept>
#include <string>

namespace bnbpe {

enum class ErrorCode {
  kInvalidArgument,
  kIo,
  kEmptyCorpus,
  kTargetTooSmall,
  kFingerprintMismatch,
  kVersionMismatch,
  kCorruptFile,
  kMissingModel,
  kMissingColumn,
  kMalformedRow,
  kClassTooSmall,
  kEmptyTrainingSet,
  kSingleClass,
  kNonFinite,
  kLengthMismatch,
  kCorpusSmallerThanWarmup,
};

const char* to_string(ErrorCode code);

// Every failure raised by the library carries a code so callers (and the CLI's
// exit-code mapping) can branch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  // Message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace bnbpe
