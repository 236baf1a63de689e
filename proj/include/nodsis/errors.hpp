#pragma once

#include <stdexcept>
#include <string>

namespace nodsis {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid model constants or state outside the trapping region.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Function evaluated outside its domain (e.g. |x| >= 1 for the nullclines).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An analysis was requested outside the regime where it is defined.
class RegimeError : public Error {
 public:
  using Error::Error;
};

/// u0 < 1 and k_p + u0 > 1, or weak peer pressure, does not hold.
class AssumptionViolation : public RegimeError {
 public:
  using RegimeError::RegimeError;
};

class NotAnEquilibrium : public Error {
 public:
  using Error::Error;
};

/// The integrated state left the trapping region by more than the clamp tolerance.
class InvarianceViolation : public Error {
 public:
  using Error::Error;
};

class NonConvergence : public Error {
 public:
  using Error::Error;
};

class BranchLinkError : public Error {
 public:
  using Error::Error;
};

/// Bad CLI flags, config files, or graph files.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace nodsis
