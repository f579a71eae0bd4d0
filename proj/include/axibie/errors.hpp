#pragma once

#include <stdexcept>
#include <string>

namespace axibie {

// Process-level failure classes. The CLI maps these to exit codes:
//   1 = configuration / I/O problems
//   2 = mathematical domain violations
//   3 = verification tolerances not met
enum class ErrorClass : int { Config = 1, Domain = 2, Verify = 3 };

class Error : public std::runtime_error {
 public:
  Error(ErrorClass cls, const std::string& code, const std::string& what)
      : std::runtime_error(code + ": " + what), cls_(cls), code_(code) {}

  [[nodiscard]] ErrorClass error_class() const noexcept { return cls_; }
  [[nodiscard]] const std::string& code() const noexcept { return code_; }

 private:
  ErrorClass cls_;
  std::string code_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what)
      : Error(ErrorClass::Config, "ConfigError", what) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what)
      : Error(ErrorClass::Domain, "DomainError", what) {}
  DomainError(const std::string& code, const std::string& what)
      : Error(ErrorClass::Domain, code, what) {}
};

class VerifyFailure : public Error {
 public:
  explicit VerifyFailure(const std::string& what)
      : Error(ErrorClass::Verify, "VerifyFailure", what) {}
};

// Named domain-error constructors, matching the diagnostic vocabulary used
// throughout the library.  Keeping them as functions (not classes) keeps the
// catch sites simple: everything is a DomainError with a stable code string.
inline DomainError err_not_positive_definite(const std::string& what) {
  return {"NotPositiveDefinite", what};
}
inline DomainError err_non_finite(const std::string& what) { return {"NonFinite", what}; }
inline DomainError err_complex_roots(const std::string& what) { return {"ComplexRoots", what}; }
inline DomainError err_degenerate_roots(const std::string& what) {
  return {"DegenerateRoots", what};
}
inline DomainError err_zero_delta(const std::string& what) { return {"ZeroDelta", what}; }
inline DomainError err_pole_hit(const std::string& what) { return {"PoleHit", what}; }
inline DomainError err_invalid_parameter(const std::string& what) {
  return {"InvalidParameter", what};
}
inline DomainError err_degenerate_point(const std::string& what) {
  return {"DegeneratePoint", what};
}
inline DomainError err_degenerate_contour(const std::string& what) {
  return {"DegenerateContour", what};
}
inline DomainError err_singular_system(const std::string& what) {
  return {"SingularSystem", what};
}
inline DomainError err_point_outside(const std::string& what) { return {"PointOutside", what}; }
inline DomainError err_pole_inside_region(const std::string& what) {
  return {"PoleInsideRegion", what};
}
inline DomainError err_convergence_failure(const std::string& what) {
  return {"ConvergenceFailure", what};
}
inline DomainError err_decay_violation(const std::string& what) {
  return {"DecayViolation", what};
}

}  // namespace axibie
