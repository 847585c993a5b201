// Error type shared by all modules. Each failure carries a kind so the CLI
// can map it to an exit status and a machine-readable diagnostic.
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace localp1 {

enum class ErrorKind {
  DuplicateVertexInFacet,
  FacetContainment,
  SimplexNotInComplex,
  NotPseudomanifold,
  NonOrientable,
  InvalidMove,
  BudgetExhausted,
  TimeoutUnknown,
  NotACycle,
  NotApplicable,
  ClosureFailure,
  UnrecognizedConfiguration,
  InvalidParams,
  DecompositionStuck,
  SphereCheckFailed,
  DimensionTooSmall,
  NotClosedManifold,
  NotClosedCycle,
  ParseError,
  ValidationFailed,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace localp1
