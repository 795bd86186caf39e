#pragma once

#include <stdexcept>
#include <string>

namespace fejer {

/// Failure classes surfaced by the library. The CLI maps each kind onto a
/// distinct exit code.
enum class ErrorKind {
  kArgument,            // malformed or out-of-range input
  kNotPsd,              // mathematical rejection: not nonnegative / not PSD
  kNotStrictlyPositive, // two-variable input has no positive margin
  kConvergence,         // truncation did not settle within the cap
  kNumerical,           // internal consistency check failed
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kArgument: return "argument";
    case ErrorKind::kNotPsd: return "not_psd";
    case ErrorKind::kNotStrictlyPositive: return "not_strictly_positive";
    case ErrorKind::kConvergence: return "convergence";
    case ErrorKind::kNumerical: return "numerical";
  }
  return "unknown";
}

}  // namespace fejer
