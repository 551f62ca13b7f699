#pragma once

#include <stdexcept>
#include <string>

namespace covpolar {

// Base of every error raised by the library.  The CLI maps subclasses to exit
// codes: validation-type errors exit with 1, certificate failures with 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Rank-deficient or otherwise degenerate input (singular matrices, zero
// vectors, non positive-definite forms).
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// The input exceeds what the machine-word parts of an algorithm can index.
class CapacityError : public Error {
 public:
  using Error::Error;
};

class NumericalConditioningError : public Error {
 public:
  using Error::Error;
};

// An exact certificate (integrality, determinant, block form) did not verify.
class CertificateFailure : public Error {
 public:
  using Error::Error;
};

// A rejection sampler exceeded its attempt cap.
class SamplerStarvation : public Error {
 public:
  using Error::Error;
};

// Malformed configuration, flags or input files.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Short machine-readable name of the error class, e.g. "precondition".
inline char const* error_kind(Error const& e) {
  if (dynamic_cast<DegenerateInput const*>(&e)) return "degenerate_input";
  if (dynamic_cast<PreconditionError const*>(&e)) return "precondition";
  if (dynamic_cast<CapacityError const*>(&e)) return "capacity";
  if (dynamic_cast<NumericalConditioningError const*>(&e)) return "numerical_conditioning";
  if (dynamic_cast<CertificateFailure const*>(&e)) return "certificate_failure";
  if (dynamic_cast<SamplerStarvation const*>(&e)) return "sampler_starvation";
  if (dynamic_cast<ValidationError const*>(&e)) return "validation";
  return "error";
}

}  // namespace covpolar
