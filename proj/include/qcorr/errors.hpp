#pragma once

#include <stdexcept>
#include <string>

namespace qcorr {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DimensionError : Error { using Error::Error; };
struct NumericalError : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct ParamError : Error { using Error::Error; };
struct FormatError : Error { using Error::Error; };
struct StateValidationError : Error { using Error::Error; };
struct BasisError : Error { using Error::Error; };
struct PurityError : Error { using Error::Error; };
struct CatalogMiss : Error { using Error::Error; };

}  // namespace qcorr
