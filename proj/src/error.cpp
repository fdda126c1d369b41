#include "scdkit/error.hpp"

namespace scdkit {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kPrecondition: return "precondition";
    case ErrorCode::kFrameMismatch: return "frame_mismatch";
    case ErrorCode::kUndefinedMetric: return "undefined_metric";
    case ErrorCode::kTruncated: return "truncated";
    case ErrorCode::kTrailingData: return "trailing_data";
    case ErrorCode::kUnsupportedVersion: return "unsupported_version";
    case ErrorCode::kDuplicateTask: return "duplicate_task";
    case ErrorCode::kMissingTask: return "missing_task";
    case ErrorCode::kMissingReference: return "missing_reference";
    case ErrorCode::kInsufficientPool: return "insufficient_pool";
  }
  return "unknown";
}

}  // namespace scdkit
