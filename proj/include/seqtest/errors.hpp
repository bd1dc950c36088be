#pragma once

#include <stdexcept>
#include <string>

namespace seqtest {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define SEQTEST_DEFINE_ERROR(Name)         \
  class Name : public Error {              \
   public:                                 \
    using Error::Error;                    \
  }

// An observation exceeded its declared norm or distance bound.
SEQTEST_DEFINE_ERROR(NormBoundViolated);
SEQTEST_DEFINE_ERROR(DimensionMismatch);
SEQTEST_DEFINE_ERROR(BlockSizeMismatch);
// Argument outside the mathematical domain of a function.
SEQTEST_DEFINE_ERROR(DomainError);
SEQTEST_DEFINE_ERROR(PolicyModeMismatch);
SEQTEST_DEFINE_ERROR(TestAlreadyDecided);
SEQTEST_DEFINE_ERROR(CapReached);
SEQTEST_DEFINE_ERROR(InsufficientData);
SEQTEST_DEFINE_ERROR(DegenerateSigma);
SEQTEST_DEFINE_ERROR(NullDelta);
SEQTEST_DEFINE_ERROR(CapExceeded);
SEQTEST_DEFINE_ERROR(ConfigError);
SEQTEST_DEFINE_ERROR(InsufficientRejections);
// Malformed input on an increment stream.
SEQTEST_DEFINE_ERROR(StreamError);

#undef SEQTEST_DEFINE_ERROR

}  // namespace seqtest
