#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace mems {

enum class errc {
  invalid_dimension,
  invalid_argument,
  degenerate_profile,
  wrong_profile,
  numeric_failure,
  no_convergence,
  singular_state,
  bound_violation,
  insufficient_trace,
};

inline const char* to_string(errc code) {
  switch (code) {
    case errc::invalid_dimension: return "invalid-dimension";
    case errc::invalid_argument: return "invalid-argument";
    case errc::degenerate_profile: return "degenerate-profile";
    case errc::wrong_profile: return "wrong-profile";
    case errc::numeric_failure: return "numeric-failure";
    case errc::no_convergence: return "no-convergence";
    case errc::singular_state: return "singular-state";
    case errc::bound_violation: return "bound-violation";
    case errc::insufficient_trace: return "insufficient-trace";
  }
  return "unknown";
}

/// Single exception type for the library. `residual` carries the last
/// residual norm for numeric failures and is NaN otherwise.
class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what, double residual = std::numeric_limits<double>::quiet_NaN())
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), residual_(residual) {}

  errc code() const noexcept { return code_; }
  double residual() const noexcept { return residual_; }

  /// Configuration problems as opposed to failures of a numeric method.
  bool is_input_error() const noexcept {
    return code_ == errc::invalid_dimension || code_ == errc::invalid_argument ||
           code_ == errc::wrong_profile || code_ == errc::degenerate_profile;
  }

 private:
  errc code_;
  double residual_;
};

}  // namespace mems
