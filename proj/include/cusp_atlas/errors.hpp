#pragma once

#include <stdexcept>
#include <string>

namespace cusp_atlas {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The caller handed in something outside an operation's contract
/// (wrong signature, degenerate form, non-isometry, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The input was valid but the computation could not finish within its
/// configured limits.
class ComputationError : public Error {
 public:
  using Error::Error;
};

class UnfactoredCofactor : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

class SearchExhausted : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

class DegenerateForm : public DomainError {
 public:
  using DomainError::DomainError;
};

class SingularForm : public DomainError {
 public:
  using DomainError::DomainError;
};

class Infeasible : public DomainError {
 public:
  using DomainError::DomainError;
};

class Inadmissible : public DomainError {
 public:
  using DomainError::DomainError;
};

class NotAnIsometry : public DomainError {
 public:
  using DomainError::DomainError;
};

class NotUnipotent : public DomainError {
 public:
  using DomainError::DomainError;
};

class WrongDiscriminant : public DomainError {
 public:
  using DomainError::DomainError;
};

class NegativeK : public DomainError {
 public:
  using DomainError::DomainError;
};

class PreconditionViolated : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace cusp_atlas
