#include "rlvr/error.hpp"

namespace rlvr {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_input: return "invalid_input";
    case ErrorCode::invalid_batch: return "invalid_batch";
    case ErrorCode::unsupported_reward: return "unsupported_reward";
    case ErrorCode::unknown_version: return "unknown_version";
    case ErrorCode::missing_field: return "missing_field";
    case ErrorCode::inconsistent_mask: return "inconsistent_mask";
    case ErrorCode::parse_error: return "parse_error";
    case ErrorCode::diverged: return "diverged";
  }
  return "unknown";
}

}  // namespace rlvr
