#pragma once

#include <stdexcept>
#include <string>

namespace loglap {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Evaluation requested at (or a sphere passing through) a point where the
// field is undefined, e.g. the center of a Kelvin inversion.
class SingularPointError : public DomainError {
 public:
  using DomainError::DomainError;
};

// A quadrature could not meet its error budget.  Carries the bound that was
// actually achieved so callers can decide whether it is still usable.
class AccuracyError : public std::runtime_error {
 public:
  AccuracyError(const std::string& what, double achieved, double requested)
      : std::runtime_error(what), achieved_(achieved), requested_(requested) {}

  double achieved() const noexcept { return achieved_; }
  double requested() const noexcept { return requested_; }

 private:
  double achieved_;
  double requested_;
};

}  // namespace loglap
