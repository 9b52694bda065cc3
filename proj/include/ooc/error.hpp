#pragma once

#include <stdexcept>
#include <string>

namespace ooc {

enum class ErrorKind {
  SingularMatrix,
  NotSymmetric,
  NoConvergence,
  StabilizationFailed,
  DimensionMismatch,
  UnknownSuite,
  NoBracket,
  Diverged,
  InfeasibleDual,
  AssumptionViolated,
  Unsolvable,
  Parse,
};

const char* to_string(ErrorKind kind) noexcept;

// Every library failure is reported through this type; the kind drives the
// CLI exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace ooc
