#pragma once

#include <stdexcept>
#include <string>

namespace nplab {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input: violated preconditions, malformed configuration, out-of-range
/// parameters. The CLI maps these to exit code 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure could not deliver its contract. Exit code 3.
class SolverError : public Error {
 public:
  using Error::Error;
};

class NegativeConcentration : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ElectroneutralityViolated : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class InvalidSpec : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class InvalidExponent : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class EmptyCorpus : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DegenerateMember : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ConstantField : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class InsufficientData : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NonNeutralCharge : public SolverError {
 public:
  using SolverError::SolverError;
};

class NoConvergence : public SolverError {
 public:
  NoConvergence(const std::string& what, double final_residual)
      : SolverError(what), final_residual_(final_residual) {}

  double final_residual() const noexcept { return final_residual_; }

 private:
  double final_residual_;
};

class CflViolation : public SolverError {
 public:
  using SolverError::SolverError;
};

}  // namespace nplab
