#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace transwave {

enum class ErrorCode {
  invalid_geometry,
  invalid_delay_bound,
  malformed_spec,
  domain_error,
  resolution_error,
  inconsistent_initial_data,
  ordering_error,
  history_underflow,
  instability,
  hypothesis_violation,
  stream_error,
  insufficient_data,
  equivalence_violation,
  usage_error,
};

const char* to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries a code; instability and
// hypothesis violations raised inside the time loop also carry the step.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what, std::optional<std::size_t> step = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> step() const noexcept { return step_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> step_;
};

}  // namespace transwave
