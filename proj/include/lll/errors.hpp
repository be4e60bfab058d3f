#pragma once

#include <stdexcept>
#include <string>

namespace lll {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define LLL_DEFINE_ERROR(Name)          \
  class Name : public Error {           \
   public:                              \
    using Error::Error;                 \
  };

LLL_DEFINE_ERROR(InvalidParameter)
LLL_DEFINE_ERROR(TruncationTooSmall)
LLL_DEFINE_ERROR(NotCentrosymmetric)
LLL_DEFINE_ERROR(WrongParityInput)
LLL_DEFINE_ERROR(OutOfRange)
LLL_DEFINE_ERROR(NoConvergence)
LLL_DEFINE_ERROR(CertificateFailed)
LLL_DEFINE_ERROR(MuNonPositive)
LLL_DEFINE_ERROR(DegenerateInput)
LLL_DEFINE_ERROR(InconsistentBracket)
LLL_DEFINE_ERROR(FormatError)

#undef LLL_DEFINE_ERROR

}  // namespace lll
