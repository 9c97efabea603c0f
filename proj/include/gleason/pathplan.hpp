#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <queue>
#include <vector>

#include "gleason/collar.hpp"
#include "gleason/domain.hpp"
#include "gleason/errors.hpp"
#include "gleason/geometry.hpp"
#include "gleason/lin.hpp"
#include "gleason/rng.hpp"

namespace gleason {

// mu_z: the unique constant with mu_z * z = pi_w(n_{w_k}).
inline cplx mu(const CVec& z, const CVec& w, const CVec& w_k, const Domain& d) {
  const CVec n_k = inner_normal(d, w_k);
  const CVec pi = project_onto_line(n_k, w);
  const cplx m = inner(pi, z) / inner(z, z);
  CVec resid = pi;
  for (std::size_t j = 0; j < resid.size(); ++j) resid[j] -= m * z[j];
  if (norm2(resid) > 1e-8 * (1.0 + norm2(pi)))
    throw NotCollinear("mu: pi_w(n_k) is not a complex multiple of z");
  return m;
}

// Curve from 0 to 1 in the lambda-plane of L_{0,z}. Interior plans are one
// polyline; collar plans append the exact segment gamma2(s) = 1 + (1-s) mu_z
// on s in [1 - sigma/2, 1].
struct PathPlan {
  enum class Kind { interior, collar };

  CVec z;
  Kind kind = Kind::interior;
  std::vector<cplx> nodes;  // gamma1 polyline: 0 .. (1 or 1 + sigma/2 mu)
  cplx mu_z = 0.0;
  double sigma_half = 0.0;
  double clearance = std::numeric_limits<double>::infinity();  // min over gamma1, z-space
  double deriv_bound = 0.0;
  double threshold_A = 0.0;  // clearance the plan was built against

  // collar correspondence (kind == collar)
  CVec w;
  int patch_id = -1;
  double s_z = 1.0;

  std::vector<double> cum;  // cumulative node arc length

  double gamma1_span() const { return kind == Kind::collar ? 1.0 - sigma_half : 1.0; }

  void finalize() {
    cum.assign(nodes.size(), 0.0);
    for (std::size_t k = 1; k < nodes.size(); ++k)
      cum[k] = cum[k - 1] + std::abs(nodes[k] - nodes[k - 1]);
    const double span = gamma1_span();
    const double speed1 = cum.back() / span;
    deriv_bound = speed1;
    if (kind == Kind::collar) deriv_bound = std::max(deriv_bound, std::abs(mu_z));
  }

  cplx point(double s) const {
    if (kind == Kind::collar && s >= 1.0 - sigma_half)
      return 1.0 + (1.0 - s) * mu_z;
    const double span = gamma1_span();
    const double target = std::clamp(s / span, 0.0, 1.0) * cum.back();
    const auto it = std::upper_bound(cum.begin(), cum.end(), target);
    std::size_t k = std::min<std::size_t>(it - cum.begin(), cum.size() - 1);
    if (k == 0) return nodes[0];
    const double seg = cum[k] - cum[k - 1];
    const double f = seg > 0.0 ? (target - cum[k - 1]) / seg : 0.0;
    return nodes[k - 1] + f * (nodes[k] - nodes[k - 1]);
  }

  cplx derivative(double s) const {
    if (kind == Kind::collar && s >= 1.0 - sigma_half) return -mu_z;
    const double span = gamma1_span();
    const double speed1 = cum.back() / span;
    const double target = std::clamp(s / span, 0.0, 1.0) * cum.back();
    auto it = std::upper_bound(cum.begin(), cum.end(), target);
    std::size_t k = std::min<std::size_t>(it - cum.begin(), cum.size() - 1);
    if (k == 0) k = 1;
    const cplx dir = (nodes[k] - nodes[k - 1]) / std::abs(nodes[k] - nodes[k - 1]);
    return dir * speed1;
  }

  CVec point_in_domain(double s) const {
    const cplx lam = point(s);
    CVec p = z;
    for (auto& x : p) x *= lam;
    return p;
  }
};

struct PlanOptions {
  int resolution = 161;
  Rng* detour_rng = nullptr;  // when set, tries a random-waypoint variant first
};

namespace detail {

class LambdaField {
public:
  LambdaField(const Domain& d, const CVec& z, double A) : d_(d), z_(z), A_(A) {}

  bool safe(cplx lam) const {
    CVec p = z_;
    for (auto& x : p) x *= lam;
    if (d_.r(p) >= 0.0) return false;
    double dist;
    try {
      dist = distance_to_boundary(d_, p);
    } catch (const Error&) {
      return false;
    }
    return dist >= A_;
  }

  bool segment_safe(cplx a, cplx b, double step) const {
    const double len = std::abs(b - a);
    const int k = std::max(2, static_cast<int>(len / step) + 1);
    for (int i = 0; i <= k; ++i)
      if (!safe(a + (b - a) * (static_cast<double>(i) / k))) return false;
    return true;
  }

  double clearance(cplx lam) const {
    CVec p = z_;
    for (auto& x : p) x *= lam;
    if (d_.r(p) >= 0.0) return -1.0;
    try {
      return distance_to_boundary(d_, p);
    } catch (const Error&) {
      return -1.0;
    }
  }

private:
  const Domain& d_;
  CVec z_;
  double A_;
};

// 8-neighbor Dijkstra over the lambda raster, lazy safety evaluation,
// deterministic tie-breaking by node index.
inline std::vector<cplx> dijkstra_path(const LambdaField& field, double R, int m, cplx from,
                                       cplx to) {
  const double h = 2.0 * R / (m - 1);
  auto node_of = [&](cplx lam) -> std::optional<int> {
    const int p = static_cast<int>(std::lround((lam.real() + R) / h));
    const int q = static_cast<int>(std::lround((lam.imag() + R) / h));
    if (p < 0 || q < 0 || p >= m || q >= m) return std::nullopt;
    return q * m + p;
  };
  auto lam_of = [&](int id) { return cplx(-R + (id % m) * h, -R + (id / m) * h); };

  std::vector<signed char> safe_cache(static_cast<std::size_t>(m) * m, -1);
  auto safe = [&](int id) {
    if (safe_cache[id] < 0) safe_cache[id] = field.safe(lam_of(id)) ? 1 : 0;
    return safe_cache[id] == 1;
  };
  auto snap = [&](cplx lam) -> std::optional<int> {
    const auto base = node_of(lam);
    if (!base) return std::nullopt;
    if (safe(*base)) return base;
    const int p0 = *base % m, q0 = *base / m;
    for (int rad = 1; rad <= 3; ++rad)
      for (int dq = -rad; dq <= rad; ++dq)
        for (int dp = -rad; dp <= rad; ++dp) {
          const int p = p0 + dp, q = q0 + dq;
          if (p < 0 || q < 0 || p >= m || q >= m) continue;
          const int id = q * m + p;
          if (safe(id)) return id;
        }
    return std::nullopt;
  };

  const auto s0 = snap(from), s1 = snap(to);
  if (!s0 || !s1) throw NoSafePath("plan_path: endpoint has no safe raster node");

  std::vector<double> dist(static_cast<std::size_t>(m) * m,
                           std::numeric_limits<double>::infinity());
  std::vector<int> prev(static_cast<std::size_t>(m) * m, -1);
  using QE = std::pair<double, int>;
  std::priority_queue<QE, std::vector<QE>, std::greater<QE>> pq;
  dist[*s0] = 0.0;
  pq.push({0.0, *s0});
  while (!pq.empty()) {
    const auto [dcur, id] = pq.top();
    pq.pop();
    if (dcur > dist[id]) continue;
    if (id == *s1) break;
    const int p = id % m, q = id / m;
    for (int dq = -1; dq <= 1; ++dq)
      for (int dp = -1; dp <= 1; ++dp) {
        if (dp == 0 && dq == 0) continue;
        const int pn = p + dp, qn = q + dq;
        if (pn < 0 || qn < 0 || pn >= m || qn >= m) continue;
        const int idn = qn * m + pn;
        if (!safe(idn)) continue;
        const double w = h * std::hypot(static_cast<double>(dp), static_cast<double>(dq));
        if (dist[id] + w < dist[idn] - 1e-15) {
          dist[idn] = dist[id] + w;
          prev[idn] = id;
          pq.push({dist[idn], idn});
        }
      }
  }
  if (!std::isfinite(dist[*s1]))
    throw NoSafePath("plan_path: safe set disconnects 0 from the target");
  std::vector<cplx> path;
  for (int id = *s1; id >= 0; id = prev[id]) path.push_back(lam_of(id));
  std::reverse(path.begin(), path.end());
  path.insert(path.begin(), from);
  path.push_back(to);

  // shortcut smoothing: line-of-sight simplification inside the safe set
  std::vector<cplx> out{path.front()};
  std::size_t i = 0;
  while (i + 1 < path.size()) {
    std::size_t j = path.size() - 1;
    for (; j > i + 1; --j)
      if (field.segment_safe(path[i], path[j], 0.5 * h)) break;
    out.push_back(path[j]);
    i = j;
  }
  return out;
}

}  // namespace detail

inline PathPlan plan_path(const Domain& d, const CollarCover& cov, const CVec& z,
                          const PlanOptions& opt = {}) {
  if (norm2(z) < 1e-12 * d.diam) throw ZeroDirection("plan_path: z ~ 0");
  if (d.r(z) > d.boundary_tol()) throw PointOutsideDomain("plan_path: z outside closure");

  PathPlan plan;
  plan.z = z;
  plan.threshold_A = cov.clearance_A;

  cplx target = 1.0;
  const auto cp = collar_membership(cov, d, z);
  if (cp) {
    plan.kind = PathPlan::Kind::collar;
    plan.w = cp->w;
    plan.patch_id = cp->patch_id;
    plan.s_z = cp->s;
    plan.sigma_half = 0.5 * cov.sigma;
    plan.mu_z = mu(z, cp->w, cov.patches[cp->patch_id].center, d);
    target = 1.0 + plan.sigma_half * plan.mu_z;
  }

  const detail::LambdaField field(d, z, cov.clearance_A);
  const double R =
      std::max({1.6, 1.2 * std::abs(target), 0.75 * d.diam / std::max(norm2(z), 1e-9)});
  const double h = 2.0 * R / (opt.resolution - 1);

  std::vector<cplx> nodes;
  if (opt.detour_rng) {
    for (int tries = 0; tries < 60 && nodes.empty(); ++tries) {
      const cplx wp(opt.detour_rng->uniform(-0.8 * R, 0.8 * R),
                    opt.detour_rng->uniform(-0.8 * R, 0.8 * R));
      if (field.safe(wp) && field.segment_safe(0.0, wp, 0.5 * h) &&
          field.segment_safe(wp, target, 0.5 * h))
        nodes = {0.0, wp, target};
    }
  }
  if (nodes.empty() && field.segment_safe(0.0, target, 0.5 * h)) nodes = {0.0, target};
  if (nodes.empty()) nodes = detail::dijkstra_path(field, R, opt.resolution, 0.0, target);

  plan.nodes = std::move(nodes);
  plan.finalize();

  // measured clearance along gamma1
  for (std::size_t k = 0; k + 1 < plan.nodes.size(); ++k) {
    const cplx a = plan.nodes[k], b = plan.nodes[k + 1];
    const int steps = std::max(4, static_cast<int>(std::abs(b - a) / (0.25 * h)));
    for (int i = 0; i <= steps; ++i) {
      const double c = field.clearance(a + (b - a) * (static_cast<double>(i) / steps));
      if (c >= 0.0) plan.clearance = std::min(plan.clearance, c);
    }
  }
  return plan;
}

// A second, independently generated plan for the same z (random safe detour);
// used by the path-independence checks.
inline PathPlan plan_path_variant(const Domain& d, const CollarCover& cov, const CVec& z,
                                  Rng& rng, int resolution = 161) {
  PlanOptions opt;
  opt.resolution = resolution;
  opt.detour_rng = &rng;
  return plan_path(d, cov, z, opt);
}

// ---- validation ----

struct PathValidation {
  double endpoint_err0 = 0.0;
  double endpoint_err1 = 0.0;
  double max_r = -std::numeric_limits<double>::infinity();  // over gamma(s) z
  double clearance_gamma1 = std::numeric_limits<double>::infinity();
  double deriv_max = 0.0;
  double collar_formula_err = 0.0;
  bool loop_free = true;
  bool membership_ok = true;
  bool clearance_ok = true;
  bool deriv_ok = true;
  double continuity_deviation = 0.0;  // max_s |gamma_z - gamma_z'|
  double continuity_eta = 0.0;
  double continuity_C = 0.0;
};

namespace detail {

inline bool segments_intersect(cplx a, cplx b, cplx c, cplx dd) {
  auto cross = [](cplx u, cplx v) { return u.real() * v.imag() - u.imag() * v.real(); };
  const double d1 = cross(b - a, c - a), d2 = cross(b - a, dd - a);
  const double d3 = cross(dd - c, a - c), d4 = cross(dd - c, b - c);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

}  // namespace detail

inline PathValidation validate_path(const Domain& d, const CollarCover& cov, const PathPlan& plan,
                                    int grid = 2000, double eta_rel = 1e-3) {
  PathValidation v;
  v.endpoint_err0 = std::abs(plan.point(0.0));
  v.endpoint_err1 = std::abs(plan.point(1.0) - 1.0);

  CVec pi;
  if (plan.kind == PathPlan::Kind::collar)
    pi = project_onto_line(inner_normal(d, cov.patches[plan.patch_id].center), plan.w);

  for (int i = 0; i <= grid; ++i) {
    const double s = static_cast<double>(i) / grid;
    const CVec p = plan.point_in_domain(s);
    v.max_r = std::max(v.max_r, d.r(p));
    v.deriv_max = std::max(v.deriv_max, std::abs(plan.derivative(s)));
    if (plan.kind == PathPlan::Kind::interior || s <= 1.0 - plan.sigma_half) {
      double dist;
      try {
        dist = distance_to_boundary(d, p);
      } catch (const Error&) {
        dist = std::numeric_limits<double>::infinity();
      }
      v.clearance_gamma1 = std::min(v.clearance_gamma1, dist);
    } else {
      CVec expect = plan.z;
      for (std::size_t j = 0; j < expect.size(); ++j) expect[j] += (1.0 - s) * pi[j];
      v.collar_formula_err = std::max(v.collar_formula_err, norm2(p - expect));
    }
  }
  v.membership_ok = v.max_r <= d.boundary_tol();
  v.clearance_ok = v.clearance_gamma1 >= plan.threshold_A * (1.0 - 1e-3);
  v.deriv_ok = v.deriv_max <= plan.deriv_bound * (1.0 + 1e-9);

  for (std::size_t i = 0; i + 1 < plan.nodes.size(); ++i)
    for (std::size_t j = i + 2; j + 1 < plan.nodes.size(); ++j)
      if (detail::segments_intersect(plan.nodes[i], plan.nodes[i + 1], plan.nodes[j],
                                     plan.nodes[j + 1]))
        v.loop_free = false;

  // continuity: replan at a nearby z and compare curves pointwise
  const double eta = eta_rel * norm2(plan.z);
  CVec z2 = plan.z;
  const cplx rot(0.0, 1.0);
  for (std::size_t j = 0; j < z2.size(); ++j) z2[j] += eta * rot * plan.z[j] / norm2(plan.z);
  if (d.r(z2) < 0.0) {
    try {
      const PathPlan p2 = plan_path(d, cov, z2);
      double dev = 0.0;
      for (int i = 0; i <= 200; ++i) {
        const double s = static_cast<double>(i) / 200;
        dev = std::max(dev, std::abs(plan.point(s) - p2.point(s)));
      }
      v.continuity_deviation = dev;
      v.continuity_eta = eta;
      v.continuity_C = dev / eta;
    } catch (const Error&) {
      v.continuity_eta = 0.0;  // replan failed; leave the experiment empty
    }
  }
  return v;
}

}  // namespace gleason
