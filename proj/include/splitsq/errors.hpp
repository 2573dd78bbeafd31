#pragma once

#include <stdexcept>
#include <string>

namespace splitsq {

// Base for every error raised by the library. Callers that only care about
// "the computation could not be carried out" can catch this one.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define SPLITSQ_ERROR(Name) \
  struct Name : Error {     \
    using Error::Error;     \
  }

SPLITSQ_ERROR(DomainError);
SPLITSQ_ERROR(NonFinite);
SPLITSQ_ERROR(NotSymmetric);
SPLITSQ_ERROR(DimensionMismatch);
SPLITSQ_ERROR(DegenerateSecular);
SPLITSQ_ERROR(SingularCovariance);
SPLITSQ_ERROR(SingularMoment);
SPLITSQ_ERROR(UndefinedAngle);
SPLITSQ_ERROR(VanishingPolarization);
SPLITSQ_ERROR(ZeroGeneratorVariance);
SPLITSQ_ERROR(ImpureStateUnsupported);
SPLITSQ_ERROR(ScaleExceeded);
SPLITSQ_ERROR(DegreeExceeded);
SPLITSQ_ERROR(UnknownFigure);
SPLITSQ_ERROR(TargetUnreachable);

#undef SPLITSQ_ERROR

}  // namespace splitsq
