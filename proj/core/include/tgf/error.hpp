#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tgf {

enum class ErrorKind {
  Structural,        // dimension mismatches, malformed inputs
  UnsupportedModel,  // operation not defined for this model or dimension
  Precondition,      // input violates a stated precondition
  Domain,            // parameter point outside the chart
  DegenerateChart,   // rank loss of a differential
  Admissibility,     // partial-tube data outside Omega(gamma; phi)
  Integration,       // ODE step control failure
  Regularity,        // singular P_w / A_w, or a failed genericity condition
  Containment,       // point off the model
  CurvatureDegeneracy,
  FrameChoice,
  NotTypeD,
  CoefficientSingularity,
  NonIntegrable,
  RecoveryDomain,
  Inconsistency,
  Input,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace tgf
