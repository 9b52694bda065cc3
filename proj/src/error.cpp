#include "ooc/error.hpp"

namespace ooc {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::SingularMatrix: return "SingularMatrix";
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::StabilizationFailed: return "StabilizationFailed";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::UnknownSuite: return "UnknownSuite";
    case ErrorKind::NoBracket: return "NoBracket";
    case ErrorKind::Diverged: return "Diverged";
    case ErrorKind::InfeasibleDual: return "InfeasibleDual";
    case ErrorKind::AssumptionViolated: return "AssumptionViolated";
    case ErrorKind::Unsolvable: return "Unsolvable";
    case ErrorKind::Parse: return "Parse";
  }
  return "Unknown";
}

}  // namespace ooc
