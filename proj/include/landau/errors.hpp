#pragma once

#include <stdexcept>
#include <string>

namespace landau {

// All numerical failures surface as typed exceptions; no routine returns NaN.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct DomainError : Error {
  using Error::Error;
};

// Argument within tolerance of a pole (non-positive integer of psi, Landau level).
struct PoleError : DomainError {
  using DomainError::DomainError;
};

// Argument on the branch cut of the principal log/sqrt.
struct BranchCutError : DomainError {
  using DomainError::DomainError;
};

// Kernel evaluation requested at coinciding points.
struct CoincidenceError : DomainError {
  using DomainError::DomainError;
};

// Normalizing coefficient vanished within tolerance.
struct DivisionDomainError : DomainError {
  using DomainError::DomainError;
};

// Quadrature or eigensolver failed to reach its tolerance within budget.
struct ConvergenceError : Error {
  using Error::Error;
};

// Fixed-point iteration diverged or left its contraction region.
struct NonConvergenceError : ConvergenceError {
  using ConvergenceError::ConvergenceError;
};

// Resolvent-type evaluation requested too close to the spectrum.
struct NearSpectrumError : Error {
  using Error::Error;
};

// Constructed matrix failed its Hermiticity check.
struct HermiticityError : Error {
  using Error::Error;
};

// Fourier sum diverges on the requested analyticity strip.
struct OverflowError : Error {
  using Error::Error;
};

}  // namespace landau
