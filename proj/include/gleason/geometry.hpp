#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "gleason/domain.hpp"
#include "gleason/errors.hpp"
#include "gleason/lin.hpp"
#include "gleason/rng.hpp"

namespace gleason {

// threshold for "vanishing" gradient; r_scale/diam is the natural slope scale
inline double gradient_floor(const Domain& d) { return 1e-7 * d.r_scale / d.diam; }

// Inner unit normal at a boundary point: -g/|g|, oriented so r decreases.
inline CVec inner_normal(const Domain& d, const CVec& w) {
  if (std::fabs(d.r(w)) > d.boundary_tol())
    throw NotOnBoundary("inner_normal: |r(w)| = " + std::to_string(std::fabs(d.r(w))));
  CVec g = d.gradient(w);
  const double gn = norm2(g);
  if (gn < gradient_floor(d)) throw GradientVanishes("inner_normal: |grad r| ~ 0");
  for (auto& x : g) x /= -gn;
  return g;
}

// Boundary frame at w: inner normal plus n-1 complex unit tangent vectors,
// each annihilating sum_j (dr/dz_j) v_j, i.e. Hermitian-orthogonal to g.
struct BoundaryFrame {
  CVec base_point;
  CVec inner_normal;
  std::vector<CVec> tangents;  // n-1 vectors, orthonormal
  int pivot = 0;               // coordinate dropped by the construction
};

// pivot_hint < 0 picks argmax_j |g_j| (deterministic); a fixed hint keeps the
// frame continuous across a whole patch.
inline BoundaryFrame tangent_frame(const Domain& d, const CVec& w, int pivot_hint = -1) {
  BoundaryFrame fr;
  fr.base_point = w;
  fr.inner_normal = inner_normal(d, w);
  CVec nu = fr.inner_normal;  // unit, parallel to g
  const int n = d.n;
  int pivot = pivot_hint;
  if (pivot < 0) {
    pivot = 0;
    for (int j = 1; j < n; ++j)
      if (std::abs(nu[j]) > std::abs(nu[pivot])) pivot = j;
  }
  fr.pivot = pivot;
  for (int j = 0; j < n && static_cast<int>(fr.tangents.size()) < n - 1; ++j) {
    if (j == pivot) continue;
    CVec u(n, 0.0);
    u[j] = 1.0;
    u = u - (inner(u, nu) / inner(nu, nu)) * nu;
    for (const auto& e : fr.tangents) u = u - inner(u, e) * e;
    const double un = norm2(u);
    if (un < 1e-8) throw GradientVanishes("tangent_frame: degenerate pivot choice");
    for (auto& x : u) x /= un;
    fr.tangents.push_back(std::move(u));
  }
  return fr;
}

// Push p onto { r = 0 } by damped Newton steps along the gradient.
inline CVec boundary_project(const Domain& d, CVec p, int max_iter = 40) {
  for (int it = 0; it < max_iter; ++it) {
    const double rv = d.r(p);
    if (std::fabs(rv) < 1e-13 * d.r_scale) return p;
    CVec g = d.gradient(p);
    const double g2 = norm2sq(g);
    if (g2 < gradient_floor(d) * gradient_floor(d))
      throw GradientVanishes("boundary_project: flat spot");
    for (std::size_t j = 0; j < p.size(); ++j) p[j] -= rv * g[j] / g2;
  }
  return p;  // close enough for the callers that tolerate 1e-13 misses
}

// Foot-point iteration: projection followed by tangential correction rounds.
// seed_hint, when given, starts the search (needed from flat interior spots).
inline CVec closest_boundary_point(const Domain& d, const CVec& p, int rounds = 4,
                                   const CVec* seed_hint = nullptr) {
  CVec q = seed_hint ? *seed_hint : p;
  if (!seed_hint) {
    CVec g = d.gradient(p);
    if (norm2(g) < 1e3 * gradient_floor(d))
      throw GradientVanishes("closest_boundary_point: need a seed from a flat spot");
  }
  q = boundary_project(d, q);
  for (int it = 0; it < rounds; ++it) {
    CVec g = d.gradient(q);
    const double gn = norm2(g);
    if (gn < gradient_floor(d)) break;
    for (auto& x : g) x /= gn;
    // remove the tangential part of (q - p), reproject
    CVec diff = q - p;
    double comp = 0.0;
    for (std::size_t j = 0; j < q.size(); ++j) comp += diff[j].real() * g[j].real() + diff[j].imag() * g[j].imag();
    CVec tang = diff;
    for (std::size_t j = 0; j < q.size(); ++j) tang[j] -= comp * g[j];
    const double tn = norm2(tang);
    for (std::size_t j = 0; j < q.size(); ++j) q[j] -= tang[j];
    q = boundary_project(d, q);
    if (tn < 1e-12 * d.diam) break;
  }
  return q;
}

// |r|/|grad r| refined by projection; with a hint this also works from
// points where the gradient vanishes (deep interior critical points).
inline double distance_to_boundary(const Domain& d, const CVec& p, const CVec* seed_hint = nullptr) {
  CVec g = d.gradient(p);
  const double gn = norm2(g);
  if (gn < 1e3 * gradient_floor(d) && !seed_hint) {
    // flat interior spot with no hint: the caller wants "deep inside"
    return std::fabs(d.r(p)) < 1e-12 * d.r_scale ? 0.0 : std::numeric_limits<double>::infinity();
  }
  CVec q = closest_boundary_point(d, p, 4, seed_hint);
  return vec_dist(p, q);
}

// Ray-fan boundary sampler: march each random direction from the seed,
// bisect every sign change of r. Collects points on all boundary sheets.
inline std::vector<CVec> boundary_sample(const Domain& d, std::size_t count, Rng& rng) {
  std::vector<CVec> out;
  const int m = 2 * d.n;
  double t_max = 0.0;
  for (const auto& iv : d.box) t_max = std::max({t_max, std::fabs(iv[0]), std::fabs(iv[1])});
  t_max = 2.0 * t_max * std::sqrt(static_cast<double>(d.n));
  const int steps = 256;
  std::size_t guard = 0;
  while (out.size() < count && guard++ < 8 * count) {
    const std::vector<double> u = rng.sphere(m);
    CVec dir = to_complex(u);
    double prev_t = 0.0;
    double prev_r = d.r(d.seed);
    for (int k = 1; k <= steps; ++k) {
      const double t = t_max * k / steps;
      CVec p(d.n);
      for (int j = 0; j < d.n; ++j) p[j] = d.seed[j] + t * dir[j];
      const double rv = d.r(p);
      if ((prev_r < 0.0) != (rv < 0.0)) {
        double lo = prev_t, hi = t, rl = prev_r;
        for (int b = 0; b < 60; ++b) {
          const double mid = 0.5 * (lo + hi);
          CVec pm(d.n);
          for (int j = 0; j < d.n; ++j) pm[j] = d.seed[j] + mid * dir[j];
          const double rm = d.r(pm);
          if ((rl < 0.0) != (rm < 0.0))
            hi = mid;
          else {
            lo = mid;
            rl = rm;
          }
        }
        CVec w(d.n);
        for (int j = 0; j < d.n; ++j) w[j] = d.seed[j] + 0.5 * (lo + hi) * dir[j];
        if (std::fabs(d.r(w)) < 1e-9 * d.r_scale) out.push_back(std::move(w));
        if (out.size() >= count) break;
      }
      prev_t = t;
      prev_r = rv;
    }
  }
  if (out.size() < count / 2)
    throw CoverFailure("boundary_sample: could not collect enough boundary points");
  return out;
}

inline std::size_t nearest_index(const std::vector<CVec>& pts, const CVec& z) {
  std::size_t best = 0;
  double bd = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double dd = norm2sq(pts[i] - z);
    if (dd < bd) {
      bd = dd;
      best = i;
    }
  }
  return best;
}

}  // namespace gleason
