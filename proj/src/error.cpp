#include "dyncon/error.hpp"

namespace dyncon {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kOutOfRange: return "OUT_OF_RANGE";
    case ErrorCode::kNotVertexStable: return "NOT_VERTEX_STABLE";
    case ErrorCode::kMultipleRoots: return "MULTIPLE_ROOTS";
    case ErrorCode::kMalformedMessage: return "MALFORMED_MESSAGE";
    case ErrorCode::kInfeasible: return "INFEASIBLE";
    case ErrorCode::kParseError: return "PARSE_ERROR";
    case ErrorCode::kInvalidArgument: return "INVALID_ARGUMENT";
  }
  return "UNKNOWN";
}

}  // namespace dyncon
