#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "gleason/errors.hpp"
#include "gleason/lin.hpp"

namespace gleason {

// Real polynomial in the 2n real coordinates (x1, y1, ..., xn, yn);
// backs the custom_polynomial_r catalog kind.
struct RealPoly {
  struct Term {
    std::vector<int> alpha;  // length 2n
    double c;
  };
  std::vector<Term> terms;

  double eval(const std::vector<double>& x) const {
    double s = 0.0;
    for (const auto& t : terms) {
      double m = t.c;
      for (std::size_t j = 0; j < t.alpha.size(); ++j)
        for (int k = 0; k < t.alpha[j]; ++k) m *= x[j];
      s += m;
    }
    return s;
  }

  std::vector<double> grad(const std::vector<double>& x) const {
    std::vector<double> g(x.size(), 0.0);
    for (const auto& t : terms) {
      for (std::size_t j = 0; j < t.alpha.size(); ++j) {
        if (t.alpha[j] == 0) continue;
        double m = t.c * t.alpha[j];
        for (std::size_t l = 0; l < t.alpha.size(); ++l) {
          const int e = t.alpha[l] - (l == j ? 1 : 0);
          for (int k = 0; k < e; ++k) m *= x[l];
        }
        g[j] += m;
      }
    }
    return g;
  }
};

// Bounded open set { r < 0 } given by a C^{1+eps} defining function.
// The gradient is the real gradient packed as a complex vector,
// g_j = dr/dx_j + i dr/dy_j, so that a step v changes r by Re<v, g>.
struct Domain {
  std::string name;
  int n = 0;
  double epsilon = 1.0;  // Holder exponent of the first derivatives
  std::function<double(const CVec&)> r;
  std::function<CVec(const CVec&)> grad;          // may be empty: finite differences
  std::vector<std::array<double, 2>> box;         // 2n real intervals
  CVec seed;                                      // designated interior point

  // cached scales, filled by finalize()
  double r_scale = 1.0;
  double diam = 1.0;

  double boundary_tol() const { return 1e-8 * r_scale; }

  CVec gradient(const CVec& z) const {
    if (grad) return grad(z);
    // central differences in each real coordinate
    const double h = 1e-6 * diam;
    CVec g(n);
    CVec zp = z;
    for (int j = 0; j < n; ++j) {
      zp[j] = z[j] + h;
      const double rx1 = r(zp);
      zp[j] = z[j] - h;
      const double rx0 = r(zp);
      zp[j] = z[j] + cplx(0.0, h);
      const double ry1 = r(zp);
      zp[j] = z[j] - cplx(0.0, h);
      const double ry0 = r(zp);
      zp[j] = z[j];
      g[j] = {(rx1 - rx0) / (2 * h), (ry1 - ry0) / (2 * h)};
    }
    return g;
  }

  // Wirtinger vector (dr/dz_1, ..., dr/dz_n) = conj(g)/2
  CVec wirtinger(const CVec& z) const {
    CVec g = gradient(z);
    for (auto& x : g) x = std::conj(x) * 0.5;
    return g;
  }

  bool inside(const CVec& z) const { return r(z) < 0.0; }

  void finalize() {
    // diam from the box diagonal, r_scale from box corners + seed + center
    double d2 = 0.0;
    for (const auto& iv : box) {
      const double w = iv[1] - iv[0];
      d2 += w * w;
    }
    diam = std::sqrt(d2);
    double rs = std::fabs(r(seed));
    const std::size_t m = box.size();
    for (std::size_t mask = 0; mask < (std::size_t(1) << m); ++mask) {
      std::vector<double> x(m);
      for (std::size_t j = 0; j < m; ++j) x[j] = (mask >> j) & 1 ? box[j][1] : box[j][0];
      rs = std::max(rs, std::fabs(r(to_complex(x))));
    }
    r_scale = std::max(rs, 1e-12);
  }
};

// ---- catalog ----

inline Domain make_ball(double radius = 1.0, CVec center = {cplx(0), cplx(0)},
                        const std::string& name = "ball") {
  Domain d;
  d.name = name;
  d.n = static_cast<int>(center.size());
  d.epsilon = 1.0;
  const double R2 = radius * radius;
  d.r = [center, R2](const CVec& z) {
    double s = 0.0;
    for (std::size_t j = 0; j < z.size(); ++j) s += std::norm(z[j] - center[j]);
    return s - R2;
  };
  d.grad = [center](const CVec& z) {
    CVec g(z.size());
    for (std::size_t j = 0; j < z.size(); ++j) g[j] = 2.0 * (z[j] - center[j]);
    return g;
  };
  for (int j = 0; j < 2 * d.n; ++j) {
    const double c = (j % 2 == 0) ? center[j / 2].real() : center[j / 2].imag();
    d.box.push_back({c - radius - 0.1, c + radius + 0.1});
  }
  d.seed = center;
  d.finalize();
  return d;
}

inline Domain make_ellipsoid(std::vector<double> semi_axes,
                             const std::string& name = "ellipsoid") {
  Domain d;
  d.name = name;
  d.n = static_cast<int>(semi_axes.size());
  d.epsilon = 1.0;
  std::vector<double> inv2(semi_axes.size());
  for (std::size_t j = 0; j < semi_axes.size(); ++j) inv2[j] = 1.0 / (semi_axes[j] * semi_axes[j]);
  d.r = [inv2](const CVec& z) {
    double s = -1.0;
    for (std::size_t j = 0; j < z.size(); ++j) s += std::norm(z[j]) * inv2[j];
    return s;
  };
  d.grad = [inv2](const CVec& z) {
    CVec g(z.size());
    for (std::size_t j = 0; j < z.size(); ++j) g[j] = 2.0 * inv2[j] * z[j];
    return g;
  };
  for (int j = 0; j < 2 * d.n; ++j) d.box.push_back({-semi_axes[j / 2] - 0.1, semi_axes[j / 2] + 0.1});
  d.seed = CVec(d.n, 0.0);
  d.finalize();
  return d;
}

// h(x) = -x/log x (h(0) = 0): C^1 at 0 but the derivative is not Holder there.
inline double grange_h(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1e9;  // outside the useful range
  return -x / std::log(x);
}

inline double grange_h_prime(double x) {
  if (x <= 0.0) return 0.0;
  const double L = std::log(x);
  return (1.0 - L) / (L * L);
}

// r(z) = |z2|^2 + h(|z1|) - 1. Bounded: h >= 1 once |z1| >= 0.5672.
// Boundary is C^1 everywhere, C^infty away from {z1 = 0}; the non-Holder
// circle is {(0, e^{i t})}.
inline Domain make_grange(const std::string& name = "grange") {
  Domain d;
  d.name = name;
  d.n = 2;
  d.epsilon = 1.0;  // nominal; the point of this domain is that no eps fits at z1 = 0
  d.r = [](const CVec& z) { return std::norm(z[1]) + grange_h(std::abs(z[0])) - 1.0; };
  d.grad = [](const CVec& z) {
    CVec g(2);
    const double a = std::abs(z[0]);
    g[0] = (a < 1e-300) ? cplx(0.0) : cplx(grange_h_prime(a)) * (z[0] / a);
    g[1] = 2.0 * z[1];
    return g;
  };
  d.box = {{-0.6, 0.6}, {-0.6, 0.6}, {-1.05, 1.05}, {-1.05, 1.05}};
  d.seed = {cplx(0.0), cplx(0.0)};
  d.finalize();
  return d;
}

// { inner < |z1 - c| < outer } x { |z2| < disc_radius }; piecewise-smooth
// counterexample domain (not C-convex). Defaults put the origin inside.
inline Domain make_annulus_product(double inner = 0.5, double outer = 1.0,
                                   cplx center1 = cplx(0.75, 0.0), double disc_radius = 1.0,
                                   const std::string& name = "annulus_product") {
  Domain d;
  d.name = name;
  d.n = 2;
  d.epsilon = 1.0;
  const double i2 = inner * inner, o2 = outer * outer, d2 = disc_radius * disc_radius;
  d.r = [center1, i2, o2, d2](const CVec& z) {
    const double a = std::norm(z[0] - center1);
    return std::max({i2 - a, a - o2, std::norm(z[1]) - d2});
  };
  d.grad = [center1, i2, o2, d2](const CVec& z) {
    const double a = std::norm(z[0] - center1);
    const double v1 = i2 - a, v2 = a - o2, v3 = std::norm(z[1]) - d2;
    CVec g(2, 0.0);
    if (v1 >= v2 && v1 >= v3)
      g[0] = -2.0 * (z[0] - center1);
    else if (v2 >= v3)
      g[0] = 2.0 * (z[0] - center1);
    else
      g[1] = 2.0 * z[1];
    return g;
  };
  d.box = {{center1.real() - outer - 0.1, center1.real() + outer + 0.1},
           {center1.imag() - outer - 0.1, center1.imag() + outer + 0.1},
           {-disc_radius - 0.1, disc_radius + 0.1},
           {-disc_radius - 0.1, disc_radius + 0.1}};
  d.seed = {cplx(0.0), cplx(0.0)};
  if (d.r(d.seed) >= 0.0) d.seed = {center1 + cplx(0.5 * (inner + outer), 0.0), cplx(0.0)};
  d.finalize();
  return d;
}

inline Domain make_custom_polynomial_r(int n, RealPoly poly,
                                       std::vector<std::array<double, 2>> box, CVec seed,
                                       double epsilon, const std::string& name) {
  Domain d;
  d.name = name;
  d.n = n;
  d.epsilon = epsilon;
  auto p = std::make_shared<RealPoly>(std::move(poly));
  d.r = [p](const CVec& z) { return p->eval(to_real(z)); };
  d.grad = [p](const CVec& z) { return to_complex(p->grad(to_real(z))); };
  d.box = std::move(box);
  d.seed = std::move(seed);
  d.finalize();
  return d;
}

// Sanity checks mirroring the type's invariants; returns human-readable issues.
inline std::vector<std::string> validate_domain(const Domain& d) {
  std::vector<std::string> issues;
  if (d.r(d.seed) >= 0.0) issues.push_back("seed point is not interior");
  const std::size_t m = d.box.size();
  for (std::size_t mask = 0; mask < (std::size_t(1) << m); ++mask) {
    std::vector<double> x(m);
    for (std::size_t j = 0; j < m; ++j) x[j] = (mask >> j) & 1 ? d.box[j][1] : d.box[j][0];
    if (d.r(to_complex(x)) <= 0.0) {
      issues.push_back("bounding box corner not outside the domain");
      break;
    }
  }
  return issues;
}

}  // namespace gleason
