#pragma once

#include <stdexcept>
#include <string>

namespace holevo {

/// Base of every error raised by the library. `kind()` is the stable name
/// used in CLI diagnostics (e.g. "PureStateError").
class Error : public std::runtime_error {
 public:
  Error(const char* kind, const std::string& message)
      : std::runtime_error(std::string(kind) + ": " + message), kind_(kind) {}

  [[nodiscard]] const char* kind() const noexcept { return kind_; }

 private:
  const char* kind_;
};

#define HOLEVO_DEFINE_ERROR(Name)                                        \
  class Name : public Error {                                            \
   public:                                                               \
    explicit Name(const std::string& message) : Error(#Name, message) {} \
  }

/// Operation needs (1 - |s|^2)^-1 but the state is (numerically) pure.
HOLEVO_DEFINE_ERROR(PureStateError);
/// Derivatives of the Bloch vector are (numerically) linearly dependent.
HOLEVO_DEFINE_ERROR(DegenerateModelError);
/// Correction-branch quantity requested where C^Z <= C^R.
HOLEVO_DEFINE_ERROR(BranchError);
/// Model is D-invariant or asymptotically classical where neither is allowed.
HOLEVO_DEFINE_ERROR(SpecialModelError);
/// Argument outside its admissible domain.
HOLEVO_DEFINE_ERROR(DomainError);
HOLEVO_DEFINE_ERROR(SingularMatrixError);
/// Candidate observables violate the local unbiasedness constraints.
HOLEVO_DEFINE_ERROR(FeasibilityError);
/// Pure-state limit of the dual vectors does not exist.
HOLEVO_DEFINE_ERROR(AsymptoticallyClassicalLimitError);

#undef HOLEVO_DEFINE_ERROR

}  // namespace holevo
