#pragma once

#include <stdexcept>
#include <string>

namespace contact3 {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define CONTACT3_ERROR(Name)                       \
  struct Name : Error {                            \
    explicit Name(const std::string& m) : Error(std::string(#Name) + ": " + m) {} \
  }

CONTACT3_ERROR(UnknownChart);
CONTACT3_ERROR(DomainViolation);
CONTACT3_ERROR(ValenceMismatch);
CONTACT3_ERROR(SingularMetric);
CONTACT3_ERROR(InvalidWeight);
CONTACT3_ERROR(DegenerateVerticalDistribution);
CONTACT3_ERROR(DegenerateHorizontal);
CONTACT3_ERROR(GaugeInconsistency);
CONTACT3_ERROR(NonInvariantCurvature);
CONTACT3_ERROR(KuoHypothesisViolated);
CONTACT3_ERROR(NotUnitSphereParameter);
CONTACT3_ERROR(CalibrationFailure);
CONTACT3_ERROR(UnknownModel);
CONTACT3_ERROR(UnknownSuite);
CONTACT3_ERROR(UnsupportedDimension);
CONTACT3_ERROR(IoFailure);

#undef CONTACT3_ERROR

}  // namespace contact3
