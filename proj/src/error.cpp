#include "windadm/common/error.hpp"

namespace windadm {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedInput: return "malformed-input";
    case ErrorCode::kNumericBreakdown: return "numeric-breakdown";
    case ErrorCode::kInfeasible: return "infeasible";
    case ErrorCode::kSchemaViolation: return "schema-violation";
    case ErrorCode::kDanglingReference: return "dangling-reference";
    case ErrorCode::kDimensionMismatch: return "dimension-mismatch";
    case ErrorCode::kCapExceeded: return "cap-exceeded";
    case ErrorCode::kQuadratureNonconvergence: return "quadrature-nonconvergence";
    case ErrorCode::kNonMonotoneLadder: return "non-monotone-ladder";
    case ErrorCode::kBigMTooSmall: return "big-m-too-small";
    case ErrorCode::kStaleResult: return "stale-result";
    case ErrorCode::kIterationCap: return "iteration-cap-exceeded";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kUsage: return "usage";
  }
  return "unknown";
}

}  // namespace windadm
