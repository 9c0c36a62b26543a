#include "transwave/error.hpp"

namespace transwave {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_geometry: return "invalid-geometry";
    case ErrorCode::invalid_delay_bound: return "invalid-delay-bound";
    case ErrorCode::malformed_spec: return "malformed-spec";
    case ErrorCode::domain_error: return "domain-error";
    case ErrorCode::resolution_error: return "resolution-error";
    case ErrorCode::inconsistent_initial_data: return "inconsistent-initial-data";
    case ErrorCode::ordering_error: return "ordering-error";
    case ErrorCode::history_underflow: return "history-underflow";
    case ErrorCode::instability: return "instability";
    case ErrorCode::hypothesis_violation: return "hypothesis-violation";
    case ErrorCode::stream_error: return "stream-error";
    case ErrorCode::insufficient_data: return "insufficient-data";
    case ErrorCode::equivalence_violation: return "equivalence-violation";
    case ErrorCode::usage_error: return "usage-error";
  }
  return "unknown";
}

namespace {

std::string decorate(ErrorCode code, const std::string& what, std::optional<std::size_t> step) {
  std::string msg = std::string(to_string(code)) + ": " + what;
  if (step) msg += " (step " + std::to_string(*step) + ")";
  return msg;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& what, std::optional<std::size_t> step)
    : std::runtime_error(decorate(code, what, step)), code_(code), step_(step) {}

}  // namespace transwave
