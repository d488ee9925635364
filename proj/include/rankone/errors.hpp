#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace rankone {

/// Violated invariant or precondition on an input value.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed serialized input (window files, CLI vector specs).
class FormatError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Base for failures of the numerics themselves rather than of the inputs.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& what, double achieved_residual)
      : NumericalError(what), residual_(achieved_residual) {}
  double achieved_residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Evaluation point too close to an atom of a measure.
class PoleError : public NumericalError {
 public:
  PoleError(const std::string& what, std::complex<double> atom)
      : NumericalError(what), atom_(atom) {}
  std::complex<double> atom() const noexcept { return atom_; }

 private:
  std::complex<double> atom_;
};

/// The CMV decoupling phase x = (1 + conj(a)) / (1 + a) is undefined at a = -1.
class SingularDecouplingError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Unitary with an eigenvalue at +1: the inverse Cayley transform is unbounded.
class UnboundedPreimageError : public NumericalError {
 public:
  UnboundedPreimageError(const std::string& what, double distance)
      : NumericalError(what), distance_(distance) {}
  double distance() const noexcept { return distance_; }

 private:
  double distance_;
};

/// One atom matched two atoms of the other measure; tighten the merge tolerance.
class AmbiguousMatchError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace rankone
