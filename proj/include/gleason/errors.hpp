#pragma once

#include <stdexcept>
#include <string>

namespace gleason {

// Base for everything this library throws on contract violations.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define GLEASON_DEFINE_ERROR(Name)                                 \
  class Name : public Error {                                      \
  public:                                                          \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
  }

GLEASON_DEFINE_ERROR(GradientVanishes);
GLEASON_DEFINE_ERROR(NotOnBoundary);
GLEASON_DEFINE_ERROR(ZeroDirection);
GLEASON_DEFINE_ERROR(CoverFailure);
GLEASON_DEFINE_ERROR(NewtonDivergence);
GLEASON_DEFINE_ERROR(DegenerateDirection);
GLEASON_DEFINE_ERROR(ResolutionWarning);
GLEASON_DEFINE_ERROR(NoCrossing);
GLEASON_DEFINE_ERROR(DimensionMismatch);
GLEASON_DEFINE_ERROR(NonVanishing);
GLEASON_DEFINE_ERROR(IllConditioned);
GLEASON_DEFINE_ERROR(NotCollinear);
GLEASON_DEFINE_ERROR(NoSafePath);
GLEASON_DEFINE_ERROR(CircleExitsDomain);
GLEASON_DEFINE_ERROR(NonConvergent);
GLEASON_DEFINE_ERROR(QuadratureStall);
GLEASON_DEFINE_ERROR(SingularSystem);
GLEASON_DEFINE_ERROR(MethodInapplicable);
GLEASON_DEFINE_ERROR(PointOutsideDomain);
GLEASON_DEFINE_ERROR(PatchSeam);

#undef GLEASON_DEFINE_ERROR

}  // namespace gleason
