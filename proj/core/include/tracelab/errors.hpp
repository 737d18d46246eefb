#pragma once

#include <stdexcept>
#include <string>

namespace tracelab {

/// Base class for all tracelab errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define TRACELAB_DEFINE_ERROR(name)        \
  class name : public Error {              \
   public:                                 \
    using Error::Error;                    \
  }

// algebra
TRACELAB_DEFINE_ERROR(EmptyAlgebra);
TRACELAB_DEFINE_ERROR(NonpositiveWeight);
TRACELAB_DEFINE_ERROR(ZeroDimension);
TRACELAB_DEFINE_ERROR(AlgebraMismatch);

// spectral
TRACELAB_DEFINE_ERROR(NotSelfAdjoint);
TRACELAB_DEFINE_ERROR(NotPositive);
TRACELAB_DEFINE_ERROR(NonpositiveP);

// functions
TRACELAB_DEFINE_ERROR(DomainOverflow);
TRACELAB_DEFINE_ERROR(ClassificationMismatch);
TRACELAB_DEFINE_ERROR(UnknownFunctionId);

// identities / inequalities
TRACELAB_DEFINE_ERROR(WeightConstraintViolated);
TRACELAB_DEFINE_ERROR(WrongConvexityClass);

// harness / cli
TRACELAB_DEFINE_ERROR(UnknownClaimId);
TRACELAB_DEFINE_ERROR(ConfigError);

// Round-off outside the documented clamping window, seed collisions and
// similar conditions that signal a bug rather than bad input.
TRACELAB_DEFINE_ERROR(NumericError);

#undef TRACELAB_DEFINE_ERROR

}  // namespace tracelab
