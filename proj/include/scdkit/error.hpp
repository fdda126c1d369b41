#pragma once

#include <stdexcept>
#include <string>

namespace scdkit {

enum class ErrorCode {
  kInvalidArgument,
  kParse,
  kIo,
  kPrecondition,
  kFrameMismatch,
  kUndefinedMetric,
  kTruncated,
  kTrailingData,
  kUnsupportedVersion,
  kDuplicateTask,
  kMissingTask,
  kMissingReference,
  kInsufficientPool,
};

const char* to_string(ErrorCode code);

// All recoverable failures in the library surface as this exception. The
// code lets callers (and the CLI) distinguish classes of failure without
// parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace scdkit
