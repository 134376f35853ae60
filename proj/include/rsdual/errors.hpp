#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rsd {

enum class ErrorKind {
  InvalidArgument,
  ConvergenceFailure,
  DomainError,
  BasePointMismatch,
  SolveFailure,
  AmbiguousMatch,
  PatchBoundary,
  ConstraintViolation,
  GaugeDegenerate,
  NotOnConstraint,
  BoundaryApproach,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Exception carrying a machine-checkable failure category.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::BasePointMismatch: return "BasePointMismatch";
    case ErrorKind::SolveFailure: return "SolveFailure";
    case ErrorKind::AmbiguousMatch: return "AmbiguousMatch";
    case ErrorKind::PatchBoundary: return "PatchBoundary";
    case ErrorKind::ConstraintViolation: return "ConstraintViolation";
    case ErrorKind::GaugeDegenerate: return "GaugeDegenerate";
    case ErrorKind::NotOnConstraint: return "NotOnConstraint";
    case ErrorKind::BoundaryApproach: return "BoundaryApproach";
  }
  return "Unknown";
}

}  // namespace rsd
