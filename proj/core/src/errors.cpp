#include "bathtub/errors.hpp"

namespace bathtub {

const char* to_string(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::configuration: return "configuration";
    case ErrorCategory::assumption_violation: return "assumption-violation";
    case ErrorCategory::non_convergence: return "non-convergence";
    case ErrorCategory::numerical: return "numerical";
    case ErrorCategory::io: return "io";
  }
  return "unknown";
}

}  // namespace bathtub
