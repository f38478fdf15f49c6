#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rlvr {

enum class ErrorCode {
  invalid_input,
  invalid_batch,
  unsupported_reward,
  unknown_version,
  missing_field,
  inconsistent_mask,
  parse_error,
  diverged,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rlvr
