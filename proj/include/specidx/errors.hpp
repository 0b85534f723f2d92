#pragma once

#include <stdexcept>
#include <string>

namespace specidx {

// Base class for failures of the numerical contracts.  The CLI maps these
// to exit code 3; configuration problems map to exit code 2.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegenerateBasis : NumericalError {
  using NumericalError::NumericalError;
};

// Eigenvalues of P-Q found in the ambiguous band between the +-1 clusters
// and the rest of the spectrum.
struct NotFredholm : NumericalError {
  using NumericalError::NumericalError;
};

struct EigenvalueAtThreshold : NumericalError {
  using NumericalError::NumericalError;
};

struct SupportExceedsBox : NumericalError {
  using NumericalError::NumericalError;
};

struct SingularShift : NumericalError {
  using NumericalError::NumericalError;
};

struct BadQuadrature : NumericalError {
  using NumericalError::NumericalError;
};

struct BoxTooSmall : NumericalError {
  using NumericalError::NumericalError;
};

struct ThetaDegenerate : NumericalError {
  using NumericalError::NumericalError;
};

struct OdeFailure : NumericalError {
  using NumericalError::NumericalError;
};

struct UnitarityViolation : NumericalError {
  using NumericalError::NumericalError;
};

struct UnderResolved : NumericalError {
  using NumericalError::NumericalError;
};

struct OutOfRange : NumericalError {
  using NumericalError::NumericalError;
};

struct DivergentBound : NumericalError {
  using NumericalError::NumericalError;
};

}  // namespace specidx
