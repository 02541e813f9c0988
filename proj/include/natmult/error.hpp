#pragma once

#include <stdexcept>
#include <string>

namespace natmult {

enum class ErrorCode {
  division_by_zero,
  incompatible_coefficient,
  incompatible_ring,
  invalid_characteristic,
  invalid_argument,
  infinite_colength,
  inconclusive,
  resource_exhausted,
  not_local,
  unsupported_ring,
  invalid_automorphism,
  invalid_index,
  parse_error,
  io_error,
  cross_check_failed,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::division_by_zero: return "division-by-zero";
    case ErrorCode::incompatible_coefficient: return "incompatible-coefficient";
    case ErrorCode::incompatible_ring: return "incompatible-ring";
    case ErrorCode::invalid_characteristic: return "invalid-characteristic";
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::infinite_colength: return "infinite-colength";
    case ErrorCode::inconclusive: return "inconclusive";
    case ErrorCode::cross_check_failed: return "cross-check-failed";
    case ErrorCode::resource_exhausted: return "resource-exhausted";
    case ErrorCode::not_local: return "not-local";
    case ErrorCode::unsupported_ring: return "unsupported-ring";
    case ErrorCode::invalid_automorphism: return "invalid-automorphism";
    case ErrorCode::invalid_index: return "invalid-index";
    case ErrorCode::parse_error: return "parse-error";
    case ErrorCode::io_error: return "io-error";
  }
  return "unknown";
}

/// Every failure raised by the library carries a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace natmult
