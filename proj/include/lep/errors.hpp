#pragma once

#include <stdexcept>
#include <string>

namespace lep {

/// Base class for every domain error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define LEP_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                    \
   public:                                                       \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
  }

// geometry
LEP_DEFINE_ERROR(SkeletonPoint);
LEP_DEFINE_ERROR(OutsideNeighborhood);
LEP_DEFINE_ERROR(NormalUndefinedAtCorner);
LEP_DEFINE_ERROR(EpsTooLarge);

// set classes
LEP_DEFINE_ERROR(NotInCollar);
LEP_DEFINE_ERROR(UnsupportedFamily);
LEP_DEFINE_ERROR(TooManyPoints);

// empirical
LEP_DEFINE_ERROR(CovarianceNotPSD);
LEP_DEFINE_ERROR(InvalidSchedule);

// verify
LEP_DEFINE_ERROR(EmptyPairing);
LEP_DEFINE_ERROR(DegenerateSolution);
LEP_DEFINE_ERROR(Infeasible);

// cli / io
LEP_DEFINE_ERROR(ConfigError);

#undef LEP_DEFINE_ERROR

}  // namespace lep
