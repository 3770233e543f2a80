#pragma once

#include <stdexcept>
#include <string>

namespace sbvp {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input (bad JSON, broken invariants). The CLI maps this to exit code 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public DomainError {
 public:
  using DomainError::DomainError;
};

class SingularityError : public Error {
 public:
  using Error::Error;
};

class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& what, double last_x)
      : Error(what + " (last good x = " + std::to_string(last_x) + ")"), last_good_x(last_x) {}
  double last_good_x;
};

class SearchError : public Error {
 public:
  using Error::Error;
};

class ResolutionError : public Error {
 public:
  using Error::Error;
};

class ConditioningError : public Error {
 public:
  using Error::Error;
};

class InconsistencyError : public Error {
 public:
  using Error::Error;
};

class ReconstructionError : public Error {
 public:
  using Error::Error;
};

}  // namespace sbvp
