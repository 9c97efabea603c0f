#pragma once

#include <cmath>
#include <complex>
#include <utility>

#include "gleason/errors.hpp"
#include "gleason/lin.hpp"

namespace gleason {

// 16-point Gauss-Legendre rule on [-1, 1]
inline constexpr double kGL16Nodes[16] = {
    -0.9894009349916499, -0.9445750230732326, -0.8656312023878318, -0.7554044083550030,
    -0.6178762444026438, -0.4580167776572274, -0.2816035507792589, -0.0950125098376374,
    0.0950125098376374,  0.2816035507792589,  0.4580167776572274,  0.6178762444026438,
    0.7554044083550030,  0.8656312023878318,  0.9445750230732326,  0.9894009349916499};

inline constexpr double kGL16Weights[16] = {
    0.0271524594117541, 0.0622535239386479, 0.0951585116824928, 0.1246289712555339,
    0.1495959888165767, 0.1691565193950025, 0.1826034150449236, 0.1894506104550685,
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};

template <typename F>
cplx gl16_panel(F&& f, double a, double b) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  cplx s = 0.0;
  for (int k = 0; k < 16; ++k) s += kGL16Weights[k] * f(mid + half * kGL16Nodes[k]);
  return half * s;
}

namespace detail {

template <typename F>
cplx adaptive_gl_rec(F& f, double a, double b, double tol, int depth, int& budget) {
  if (--budget <= 0) throw QuadratureStall("adaptive quadrature budget exhausted");
  const cplx whole = gl16_panel(f, a, b);
  const double mid = 0.5 * (a + b);
  const cplx halves = gl16_panel(f, a, mid) + gl16_panel(f, mid, b);
  if (std::abs(whole - halves) <= tol * (1.0 + std::abs(halves)) || depth >= 24) return halves;
  return adaptive_gl_rec(f, a, mid, 0.5 * tol, depth + 1, budget) +
         adaptive_gl_rec(f, mid, b, 0.5 * tol, depth + 1, budget);
}

}  // namespace detail

// Composite adaptive Gauss-Legendre with panel-disagreement refinement.
template <typename F>
cplx adaptive_gl(F&& f, double a, double b, double tol = 1e-9, int budget = 600) {
  int left = budget;
  return detail::adaptive_gl_rec(f, a, b, tol, 0, left);
}

// (1/2 pi i) oint g(t)/t^2 dt on |t| = rho by the m-point trapezoid rule;
// spectrally accurate for g analytic on a neighborhood of the disc.
template <typename G>
cplx circle_derivative_raw(G&& g, double rho, int m) {
  cplx s = 0.0;
  for (int k = 0; k < m; ++k) {
    const double th = 2.0 * M_PI * k / m;
    const cplx ph(std::cos(th), std::sin(th));
    s += g(rho * ph) / ph;
  }
  return s / (static_cast<double>(m) * rho);
}

}  // namespace gleason
