#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "gleason/collar.hpp"
#include "gleason/domain.hpp"
#include "gleason/errors.hpp"
#include "gleason/fitting.hpp"
#include "gleason/geometry.hpp"
#include "gleason/lin.hpp"
#include "gleason/pathplan.hpp"
#include "gleason/polynomial.hpp"
#include "gleason/quadrature.hpp"
#include "gleason/rng.hpp"

namespace gleason {

// Holomorphic function on Omega. validity_margin tells how far past the
// boundary the derivative circles may reach (infinity = entire function).
struct HolomorphicOracle {
  std::string name;
  std::function<cplx(const CVec&)> f;
  double validity_margin = 0.0;
  bool vanishes_at_origin = true;
  std::optional<Polynomial> poly;  // set when f is exactly a polynomial

  cplx operator()(const CVec& z) const { return f(z); }

  static HolomorphicOracle from_polynomial(Polynomial p, std::string name = "poly") {
    HolomorphicOracle o;
    o.name = std::move(name);
    o.vanishes_at_origin = p.vanishes_at_origin();
    o.validity_margin = std::numeric_limits<double>::infinity();
    auto sp = std::make_shared<Polynomial>(std::move(p));
    o.f = [sp](const CVec& z) { return sp->eval(z); };
    o.poly = *sp;
    return o;
  }
};

namespace detail {

inline bool node_admissible(const Domain& d, const CVec& p, double validity_margin) {
  if (std::isinf(validity_margin)) return true;
  if (d.r(p) < 0.0) return true;
  if (validity_margin <= 0.0) return false;
  try {
    return distance_to_boundary(d, p) < validity_margin;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace detail

// d/dt f(center + t e) |_{t=0} by the trapezoid rule on the circle |t| = rho.
// The 2m-point pass reuses the m-point nodes, so the Richardson discrepancy
// costs nothing extra.
inline cplx cauchy_directional_derivative(const HolomorphicOracle& f, const Domain& d,
                                          const CVec& center, const CVec& e, double rho, int m = 64,
                                          double* discrepancy = nullptr) {
  if (m < 16) throw DimensionMismatch("cauchy_directional_derivative: m >= 16");
  if (!(rho > 0.0)) throw CircleExitsDomain("cauchy_directional_derivative: rho <= 0");
  const int M = 2 * m;
  cplx sum_all = 0.0, sum_even = 0.0;
  CVec p(center.size());
  for (int k = 0; k < M; ++k) {
    const double th = 2.0 * M_PI * k / M;
    const cplx ph(std::cos(th), std::sin(th));
    for (std::size_t j = 0; j < p.size(); ++j) p[j] = center[j] + rho * ph * e[j];
    if (!detail::node_admissible(d, p, f.validity_margin))
      throw CircleExitsDomain("cauchy_directional_derivative: node outside the domain");
    const cplx v = f(p) / ph;
    sum_all += v;
    if (k % 2 == 0) sum_even += v;
  }
  const cplx d2m = sum_all / (static_cast<double>(M) * rho);
  const cplx dm = sum_even / (static_cast<double>(m) * rho);
  const double disc = std::abs(d2m - dm);
  if (discrepancy) *discrepancy = disc;
  if (disc > 1e-6 * (1.0 + std::abs(d2m)))
    throw NonConvergent("cauchy_directional_derivative: m vs 2m disagreement " +
                        std::to_string(disc));
  return d2m;
}

// I(z) = int_gamma (d/dt f(gamma(s) z + t e))|_{t=0} gamma'(s) ds with the
// interior radius min(A, clearance)/2 on gamma1 and the collar schedule
// (1-s)^{1/(1+eps/2)}/2 on gamma2; the endpoint singularity is flattened by
// u = (1-s)^{eps/(2+eps)}.
inline cplx integrate_I(const HolomorphicOracle& f, const CVec& z, const CVec& e,
                        const PathPlan& plan, const Domain& d, const CollarCover& cov,
                        int circle_m = 64, double tol = 1e-9) {
  if (vec_dist(z, plan.z) > 1e-12 * d.diam)
    throw DimensionMismatch("integrate_I: plan was built for a different z");
  const double A = cov.clearance_A;

  auto deriv_interior = [&](double s) {
    const CVec p = plan.point_in_domain(s);
    double clear;
    try {
      clear = distance_to_boundary(d, p);
    } catch (const Error&) {
      clear = A;
    }
    const double rho = 0.5 * std::min(A, clear);
    return cauchy_directional_derivative(f, d, p, e, std::max(rho, 1e-12), circle_m) *
           plan.derivative(s);
  };

  cplx total = 0.0;
  const double span1 = plan.gamma1_span();

  // gamma1: integrate per polyline segment (the integrand is smooth inside each)
  for (std::size_t k = 0; k + 1 < plan.nodes.size(); ++k) {
    const double sa = span1 * plan.cum[k] / plan.cum.back();
    const double sb = span1 * plan.cum[k + 1] / plan.cum.back();
    if (sb - sa < 1e-15) continue;
    total += adaptive_gl(deriv_interior, sa, sb, tol);
  }

  if (plan.kind == PathPlan::Kind::collar) {
    const double eps = d.epsilon;
    const double q = (2.0 + eps) / eps;
    const double u_max = std::pow(plan.sigma_half, 1.0 / q);
    auto deriv_collar = [&](double u) {
      const double uq = std::pow(u, q);
      const double s = 1.0 - uq;
      const CVec p = plan.point_in_domain(s);
      // (1-s)^{1/(1+eps/2)} = u^{2/eps}
      const double rho = 0.5 * std::min(std::pow(u, 2.0 / eps), cov.sigma);
      const cplx dv =
          cauchy_directional_derivative(f, d, p, e, std::max(rho, 1e-13), circle_m);
      return dv * (-plan.mu_z) * q * std::pow(u, q - 1.0);
    };
    total += adaptive_gl(deriv_collar, 0.0, u_max, tol);
  }
  return total;
}

// The n x n system: rows e^1(z) .. e^{n-1}(z), then z (bilinear products);
// rhs carries the tangent-direction integrals and f(z). Cramer recovers
// x_i = T_i(f)(z) and reports |Delta(z)|.
inline std::vector<cplx> solve_SY(const BoundaryFrame& frame, const CVec& z, const CVec& rhs,
                                  double* det_abs = nullptr) {
  const std::size_t n = z.size();
  if (frame.tangents.size() + 1 != n || rhs.size() != n)
    throw DimensionMismatch("solve_SY: need n-1 tangent rows and n rhs entries");
  CMat m(n, CVec(n));
  for (std::size_t j = 0; j + 1 < n; ++j) m[j] = frame.tangents[j];
  m[n - 1] = z;
  return cramer_solve(m, rhs, det_abs, 1e-8);
}

// ---- polynomial decomposition (exact) ----

struct PolyDecomposition {
  std::vector<Polynomial> parts;  // f_i with P(z) - P(p) = sum (z_i - p_i) f_i(z)
  double remainder_rel = 0.0;     // coefficient norm of the residual polynomial, relative
};

inline PolyDecomposition decompose_polynomial(const Polynomial& P, const CVec& p,
                                              const Domain& d) {
  if (d.r(p) >= 0.0) throw PointOutsideDomain("decompose_polynomial: p outside the domain");
  const int n = P.dimension();
  Polynomial Q = P.translate(p);  // Q(w) = P(w + p)
  const cplx q0 = Q.coefficient(MultiIndex(n, 0));
  Q = Q - Polynomial::constant(n, q0);

  PolyDecomposition out;
  double scale = std::max(1.0, std::max(P.coeff_linf(), Q.coeff_linf()));
  Polynomial sum = Polynomial::zero(n);
  CVec minus_p(n);
  for (int j = 0; j < n; ++j) minus_p[j] = -p[j];
  for (int i = 0; i < n; ++i) {
    Polynomial fi = Q.leibenzon(i).translate(minus_p);
    const Polynomial contrib = fi.mul_coordinate_minus(i, p[i]);
    scale = std::max(scale, contrib.coeff_linf());
    sum = sum + contrib;
    out.parts.push_back(std::move(fi));
  }
  const Polynomial rem = sum - (P - Polynomial::constant(n, P.eval(p)));
  out.remainder_rel = rem.coeff_linf() / scale;
  return out;
}

// ---- pointwise decomposition ----

enum class Method { auto_select, closed_form, direct_contour, sy_system, approximant_limit };

inline const char* method_name(Method m) {
  switch (m) {
    case Method::closed_form: return "closed_form";
    case Method::direct_contour: return "direct_contour";
    case Method::sy_system: return "sy_system";
    case Method::approximant_limit: return "approximant_limit";
    default: return "auto";
  }
}

struct DecompositionReport {
  CVec z;
  std::vector<cplx> values;  // T_1(f)(z) .. T_n(f)(z)
  double residual = 0.0;     // |f(z) - sum z_i T_i(f)(z)|
  std::string method;
  bool ok = false;
  double det_abs = 0.0;          // sy_system only
  double approximant_tail = 0.0;  // approximant_limit only
  double residual_tol = 1e-7;
};

struct DecomposeOptions {
  Method method = Method::auto_select;
  double residual_tol = 1e-7;
  int approx_degree_lo = 2;
  int approx_degree_hi = 12;
  std::uint64_t approx_seed = 17;
  int circle_m = 64;
};

namespace detail {

inline void check_vanishing(const HolomorphicOracle& f, const Domain& d) {
  const cplx f0 = f(CVec(d.n, 0.0));
  if (!f.vanishes_at_origin || std::abs(f0) > 1e-12)
    throw NonVanishing("decompose_at_point: f(0) != 0");
}

inline double origin_clearance(const Domain& d, const CollarCover& cov) {
  double dd = std::numeric_limits<double>::infinity();
  const CVec zero(d.n, 0.0);
  for (const auto& w : cov.boundary) dd = std::min(dd, vec_dist(w, zero));
  return dd;
}

// T_i over the straight segment; valid near the origin where the whole
// segment keeps clearance d0 - |z|
inline std::vector<cplx> tiny_z_values(const HolomorphicOracle& f, const CVec& z, const Domain& d,
                                       const CollarCover& cov, int circle_m) {
  const double d0 = origin_clearance(d, cov);
  const double rho = 0.5 * std::max(d0 - norm2(z), 0.1 * d0);
  std::vector<cplx> vals(d.n);
  for (int i = 0; i < d.n; ++i) {
    CVec e(d.n, 0.0);
    e[i] = 1.0;
    if (norm2(z) < 1e-14 * d.diam) {
      vals[i] = cauchy_directional_derivative(f, d, CVec(d.n, 0.0), e, rho, circle_m);
    } else {
      auto g = [&](double lam) {
        CVec p = z;
        for (auto& x : p) x *= lam;
        return cauchy_directional_derivative(f, d, p, e, rho, circle_m);
      };
      vals[i] = adaptive_gl(g, 0.0, 1.0, 1e-10);
    }
  }
  return vals;
}

}  // namespace detail

inline DecompositionReport decompose_at_point(const HolomorphicOracle& f, const CVec& z,
                                              const Domain& d, const CollarCover& cov,
                                              const DecomposeOptions& opt = {}) {
  detail::check_vanishing(f, d);
  DecompositionReport rep;
  rep.z = z;
  rep.residual_tol = opt.residual_tol;
  Method method = opt.method;

  const bool tiny = norm2(z) < 1e-3 * d.diam;
  std::optional<CollarPoint> cp;
  if (!tiny) cp = collar_membership(cov, d, z);
  if (method == Method::auto_select)
    method = (cp ? Method::sy_system : Method::direct_contour);

  switch (method) {
    case Method::closed_form: {
      if (!f.poly) throw MethodInapplicable("closed_form needs a polynomial oracle");
      rep.values.resize(d.n);
      for (int i = 0; i < d.n; ++i) rep.values[i] = f.poly->leibenzon(i).eval(z);
      break;
    }
    case Method::direct_contour: {
      if (tiny) {
        rep.values = detail::tiny_z_values(f, z, d, cov, opt.circle_m);
        break;
      }
      if (cp)
        throw MethodInapplicable(
            "direct_contour: z lies in the collar; coordinate circles would exit the domain");
      const PathPlan plan = plan_path(d, cov, z);
      rep.values.resize(d.n);
      for (int i = 0; i < d.n; ++i) {
        CVec e(d.n, 0.0);
        e[i] = 1.0;
        rep.values[i] = integrate_I(f, z, e, plan, d, cov, opt.circle_m);
      }
      break;
    }
    case Method::sy_system: {
      if (tiny || !cp)
        throw MethodInapplicable("sy_system: z is not in the collar");
      const PathPlan plan = plan_path(d, cov, z);
      const BoundaryFrame frame =
          tangent_frame(d, cp->w, cov.patches[cp->patch_id].pivot);
      CVec rhs(d.n);
      for (int j = 0; j + 1 < d.n; ++j)
        rhs[j] = integrate_I(f, z, frame.tangents[j], plan, d, cov, opt.circle_m);
      rhs[d.n - 1] = f(z);
      rep.values = solve_SY(frame, z, rhs, &rep.det_abs);
      break;
    }
    case Method::approximant_limit: {
      const SampleSet S = interior_sample(d, std::max<std::size_t>(
          3 * monomial_count(d.n, opt.approx_degree_hi), 400), opt.approx_seed);
      std::vector<cplx> prev, cur;
      for (int deg = opt.approx_degree_lo; deg <= opt.approx_degree_hi; ++deg) {
        const FitResult fit = fit_approximant(f.f, S, deg);
        cur.assign(d.n, 0.0);
        for (int i = 0; i < d.n; ++i) cur[i] = fit.poly.leibenzon(i).eval(z);
        if (!prev.empty()) {
          double tail = 0.0;
          for (int i = 0; i < d.n; ++i) tail = std::max(tail, std::abs(cur[i] - prev[i]));
          rep.approximant_tail = tail;
        }
        prev = cur;
      }
      rep.values = cur;
      break;
    }
    default:
      throw MethodInapplicable("unknown method");
  }

  rep.method = method_name(method);
  const cplx fz = f(z);
  cplx sum = 0.0;
  for (int i = 0; i < d.n; ++i) sum += z[i] * rep.values[i];
  rep.residual = std::abs(fz - sum);
  rep.ok = rep.residual < opt.residual_tol * (1.0 + std::abs(fz));
  return rep;
}

// ---- the empirical key-estimate table ----

struct KRow {
  int degree = 0;
  int trial = 0;
  double ratio = 0.0;  // max_i ||T_i(P)||_B / ||P||_S
};

struct KTable {
  std::vector<KRow> rows;
  std::vector<std::pair<int, double>> per_degree;  // (degree, max ratio)
};

struct BallSpec {
  CVec center;
  double radius = 0.1;
};

inline std::vector<CVec> sample_ball(const BallSpec& B, int count, Rng& rng) {
  std::vector<CVec> pts;
  const int n = static_cast<int>(B.center.size());
  while (static_cast<int>(pts.size()) < count) {
    const auto u = rng.sphere(2 * n);
    const double rad = B.radius * std::pow(rng.uniform(), 1.0 / (2.0 * n));
    CVec z = B.center;
    for (int j = 0; j < n; ++j) z[j] += rad * cplx(u[2 * j], u[2 * j + 1]);
    pts.push_back(std::move(z));
  }
  return pts;
}

// S built the way the key estimate wants it: the supports of every derivative
// circle used along the plans of a B-sample, dilated by 1.05 and clipped to
// { r <= -delta }.
inline std::vector<CVec> build_recipe_S(const Domain& d, const CollarCover& cov,
                                        const BallSpec& B, double delta, std::uint64_t seed = 5) {
  Rng rng(seed);
  std::vector<CVec> S;
  const auto zs = sample_ball(B, 48, rng);
  const double A = cov.clearance_A;
  auto keep = [&](const CVec& p) {
    if (d.r(p) <= -delta) S.push_back(p);
    CVec q = p;
    for (auto& x : q) x *= 1.05;
    if (d.r(q) <= -delta) S.push_back(std::move(q));
  };
  for (const auto& z : zs) {
    if (norm2(z) < 1e-9) continue;
    PathPlan plan;
    try {
      plan = plan_path(d, cov, z);
    } catch (const Error&) {
      continue;
    }
    for (int si = 0; si <= 16; ++si) {
      const double s = static_cast<double>(si) / 16;
      const CVec p = plan.point_in_domain(s);
      double rho;
      if (plan.kind == PathPlan::Kind::collar && s > 1.0 - plan.sigma_half) {
        rho = 0.5 * std::min(std::pow(1.0 - s, 1.0 / (1.0 + 0.5 * d.epsilon)), cov.sigma);
      } else {
        double clear;
        try {
          clear = distance_to_boundary(d, p);
        } catch (const Error&) {
          clear = A;
        }
        rho = 0.5 * std::min(A, clear);
      }
      std::vector<CVec> dirs;
      for (int i = 0; i < d.n; ++i) {
        CVec e(d.n, 0.0);
        e[i] = 1.0;
        dirs.push_back(std::move(e));
      }
      if (plan.kind == PathPlan::Kind::collar) {
        try {
          const auto fr = tangent_frame(d, plan.w, cov.patches[plan.patch_id].pivot);
          for (const auto& e : fr.tangents) dirs.push_back(e);
        } catch (const Error&) {
        }
      }
      for (const auto& e : dirs)
        for (int a = 0; a < 12; ++a) {
          const double th = 2.0 * M_PI * a / 12;
          keep(axpy(p, rho * cplx(std::cos(th), std::sin(th)), e));
        }
    }
  }
  if (S.empty()) throw CoverFailure("build_recipe_S: empty compact");
  return S;
}

// Random polynomials with unit sampled sup on S; rows carry
// max_i ||T_i(P)||_B / ||P||_S per (degree, trial).
inline KTable estimate_K(const Domain& d, const CollarCover& cov, const BallSpec& B,
                         const std::vector<CVec>& S, const std::vector<int>& degrees, int trials,
                         std::uint64_t seed = 7) {
  (void)cov;
  Rng rng(seed);
  KTable table;
  const auto bpts = sample_ball(B, 160, rng);
  for (int deg : degrees) {
    const auto alphas = monomials_vanishing(d.n, deg);
    double degree_max = 0.0;
    for (int t = 0; t < trials; ++t) {
      std::vector<Polynomial::Term> terms;
      terms.reserve(alphas.size());
      for (const auto& a : alphas) terms.push_back({a, rng.unit_disc()});
      Polynomial P(d.n, std::move(terms));
      double supS = 0.0;
      for (const auto& s : S) supS = std::max(supS, std::abs(P.eval(s)));
      if (supS < 1e-14) continue;
      double ratio = 0.0;
      for (int i = 0; i < d.n; ++i) {
        const Polynomial Ti = P.leibenzon(i);
        double supB = 0.0;
        for (const auto& z : bpts) supB = std::max(supB, std::abs(Ti.eval(z)));
        ratio = std::max(ratio, supB / supS);
      }
      table.rows.push_back({deg, t, ratio});
      degree_max = std::max(degree_max, ratio);
    }
    table.per_degree.push_back({deg, degree_max});
  }
  return table;
}

// ---- continuity of I(z) and T_i(f)(z) along z_n -> z inside one patch ----

struct ContinuityRow {
  double dist = 0.0;     // |z_n - z|
  double delta_I = 0.0;  // max_j |I_j(z_n) - I_j(z)|
  double delta_T = 0.0;  // max_i |T_i(f)(z_n) - T_i(f)(z)|
};

inline std::vector<ContinuityRow> continuity_experiment(const HolomorphicOracle& f, const CVec& z,
                                                        const std::vector<CVec>& zs,
                                                        const Domain& d, const CollarCover& cov,
                                                        const DecomposeOptions& opt = {}) {
  const auto base = collar_membership(cov, d, z);
  if (!base) throw PatchSeam("continuity_experiment: z is not in the collar");
  const int patch = base->patch_id;
  const BoundaryFrame frame0 = tangent_frame(d, base->w, cov.patches[patch].pivot);

  auto eval_at = [&](const CVec& zz, std::vector<cplx>& Is, std::vector<cplx>& Ts) {
    const auto cpz = collar_membership(cov, d, zz, patch);
    if (!cpz || cpz->patch_id != patch)
      throw PatchSeam("continuity_experiment: sequence point left the patch");
    const PathPlan plan = plan_path(d, cov, zz);
    const BoundaryFrame fr = tangent_frame(d, cpz->w, cov.patches[patch].pivot);
    Is.clear();
    CVec rhs(d.n);
    for (int j = 0; j + 1 < d.n; ++j) {
      rhs[j] = integrate_I(f, zz, fr.tangents[j], plan, d, cov, opt.circle_m);
      Is.push_back(rhs[j]);
    }
    rhs[d.n - 1] = f(zz);
    double det = 0.0;
    const auto x = solve_SY(fr, zz, rhs, &det);
    Ts.assign(x.begin(), x.end());
  };

  std::vector<cplx> I0, T0;
  eval_at(z, I0, T0);
  std::vector<ContinuityRow> rows;
  for (const auto& zn : zs) {
    std::vector<cplx> In, Tn;
    eval_at(zn, In, Tn);
    ContinuityRow row;
    row.dist = vec_dist(zn, z);
    for (std::size_t j = 0; j < I0.size(); ++j)
      row.delta_I = std::max(row.delta_I, std::abs(In[j] - I0[j]));
    for (std::size_t i = 0; i < T0.size(); ++i)
      row.delta_T = std::max(row.delta_T, std::abs(Tn[i] - T0[i]));
    rows.push_back(row);
  }
  (void)frame0;
  return rows;
}

}  // namespace gleason
