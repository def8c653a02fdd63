#pragma once

#include <stdexcept>
#include <string>

namespace mmoc {

// Thrown when a group logarithm is requested at the cut of the restricted
// chart (trace of the rotation within tolerance of -2).
struct ChartViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A state or trajectory left the domain where the kinematics are defined
// (for the rotation model, |s*v| >= 1 breaks the square root). `stage` is
// the first offending stage index, or -1 when not tied to one.
struct DomainViolation : std::runtime_error {
  int stage;
  explicit DomainViolation(const std::string& what, int stage_ = -1)
      : std::runtime_error(what), stage(stage_) {}
};

// Non-finite values showed up where finite arithmetic was required.
struct NumericalBreakdown : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Linear solve inside the Newton iteration failed even after the one-shot
// diagonal (Levenberg-style) fallback.
struct SingularJacobian : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The backward game recursion lost well-posedness (a feedback denominator
// crossed zero).
struct GameIllPosed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace mmoc
