#pragma once

#include <catch2/catch_amalgamated.hpp>
#include <complex>
#include <vector>

#include "gleason/lin.hpp"
#include "gleason/polynomial.hpp"
#include "gleason/rng.hpp"

using gleason::operator+;
using gleason::operator-;
using gleason::operator*;

namespace gt {

using gleason::cplx;
using gleason::CVec;

inline bool approx(cplx a, cplx b, double tol = 1e-12) { return std::abs(a - b) <= tol; }

inline bool approx_vec(const CVec& a, const CVec& b, double tol = 1e-12) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!approx(a[i], b[i], tol)) return false;
  return true;
}

// random polynomial with coefficients in the unit disc over all |alpha| <= d,
// optionally forced to vanish at the origin
inline gleason::Polynomial random_poly(int n, int d, gleason::Rng& rng, bool vanish = true) {
  std::vector<gleason::Polynomial::Term> terms;
  gleason::MultiIndex a(n, 0);
  const auto idxs = gleason::monomials_vanishing(n, d);
  for (const auto& alpha : idxs) terms.push_back({alpha, rng.unit_disc()});
  if (!vanish) terms.push_back({gleason::MultiIndex(n, 0), rng.unit_disc()});
  return gleason::Polynomial(n, std::move(terms));
}

inline CVec pt(double a, double b) { return {cplx(a), cplx(b)}; }
inline CVec pt(cplx a, cplx b) { return {a, b}; }

}  // namespace gt
