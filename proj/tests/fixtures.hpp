#pragma once

#include "gleason/collar.hpp"
#include "gleason/domain.hpp"

namespace gt {

// covers are expensive to build; share one per catalog domain across tests
inline const gleason::Domain& ball() {
  static const gleason::Domain d = gleason::make_ball();
  return d;
}

inline const gleason::Domain& ellipsoid() {
  static const gleason::Domain d = gleason::make_ellipsoid({1.0, 0.5});
  return d;
}

inline const gleason::Domain& annulus() {
  static const gleason::Domain d = gleason::make_annulus_product();
  return d;
}

inline const gleason::Domain& grange() {
  static const gleason::Domain d = gleason::make_grange();
  return d;
}

inline const gleason::CollarCover& ball_cover() {
  static const gleason::CollarCover c = gleason::collar_cover(ball(), 8);
  return c;
}

inline const gleason::CollarCover& ellipsoid_cover() {
  static const gleason::CollarCover c = gleason::collar_cover(ellipsoid(), 12);
  return c;
}

inline const gleason::CollarCover& annulus_cover() {
  static const gleason::CollarCover c = gleason::collar_cover(annulus(), 16);
  return c;
}

}  // namespace gt
