#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "gleason/domain.hpp"
#include "gleason/errors.hpp"
#include "gleason/geometry.hpp"
#include "gleason/lin.hpp"
#include "gleason/rng.hpp"

namespace gleason {

struct CollarPatch {
  CVec center;               // w_i on the boundary
  double radius = 0.0;       // W_i = open ball(center, radius)
  CVec normal;               // n_{w_i}
  int pivot = 0;             // frame pivot frozen from the center
  double sigma_i = 0.0;
  std::vector<int> samples;  // boundary sample ids inside W_i
};

struct CollarCover {
  std::vector<CollarPatch> patches;
  std::vector<CVec> boundary;       // dense boundary sample
  std::vector<int> nearest_patch;   // per boundary sample
  double sigma = 0.0;               // min over patches
  double clearance_A = 0.0;         // min distance from sampled Omega \ V to the boundary
  bool sigma_floor_hit = false;
  std::vector<std::string> warnings;
};

// z + (1-s) pi_z(n_center) + t e  — the point Lemma-1-style membership tests.
inline CVec collar_offset_point(const CVec& z, const CVec& n_center, double s, cplx t,
                                const CVec& e) {
  CVec p = axpy(z, cplx(1.0 - s), project_onto_line(n_center, z));
  return axpy(p, t, e);
}

namespace detail {

// normalized membership margin; positive means strictly inside
inline double membership_margin(const Domain& d, const CVec& z, const CVec& n_center, double s,
                                cplx t, const CVec& e) {
  return -d.r(collar_offset_point(z, n_center, s, t, e)) / d.r_scale;
}

inline bool patch_sigma_ok(const Domain& d, const CollarPatch& patch,
                           const std::vector<CVec>& boundary, double sigma, double eps,
                           Rng& rng) {
  const double spow = std::pow(sigma, 1.0 + 0.5 * eps);
  static constexpr double kEtaFrac[] = {1.0, 0.5, 0.25, 0.06, 0.01, 1e-4};
  static constexpr double kTFrac[] = {0.98, 0.6, 0.25};
  std::vector<const CVec*> zs;
  zs.push_back(&patch.center);
  for (std::size_t k = 0; k < patch.samples.size() && zs.size() < 24; ++k)
    zs.push_back(&boundary[patch.samples[k]]);
  for (const CVec* zp : zs) {
    BoundaryFrame fr;
    try {
      fr = tangent_frame(d, *zp, patch.pivot);
    } catch (const Error&) {
      return false;
    }
    std::vector<CVec> dirs = fr.tangents;
    if (fr.tangents.size() > 1) {
      CVec mix(d.n, 0.0);
      for (const auto& e : fr.tangents) mix = axpy(mix, rng.unit_disc(), e);
      dirs.push_back(normalized(mix));
    }
    for (double ef : kEtaFrac) {
      const double eta = spow * ef;
      const double s = 1.0 - eta;
      const double bound = std::pow(eta, 1.0 / (1.0 + 0.5 * eps));
      for (double tf : kTFrac) {
        for (int ph = 0; ph < 8; ++ph) {
          const double th = 2.0 * M_PI * ph / 8.0;
          const cplx t = tf * bound * cplx(std::cos(th), std::sin(th));
          for (const auto& e : dirs)
            if (membership_margin(d, *zp, patch.normal, s, t, e) <= 0.0) return false;
        }
      }
    }
  }
  return true;
}

}  // namespace detail

struct CoverOptions {
  int boundary_count = 1500;
  std::uint64_t seed = 1;
  double sigma_start = 0.4;
  double sigma_floor = 1e-3;
  int clearance_samples = 2500;
};

std::optional<struct CollarPoint> collar_membership(const CollarCover&, const Domain&,
                                                    const CVec& z);

struct CollarPoint {
  CVec w;          // boundary point corresponding to z
  int patch_id = -1;
  double s = 1.0;
  double residual = 0.0;  // || F(w, s) - z ||
};

inline CollarCover collar_cover(const Domain& d, int patch_budget,
                                const CoverOptions& opt = {}) {
  if (patch_budget <= 0) throw CoverFailure("collar_cover: patch budget exhausted");
  Rng rng(opt.seed);
  CollarCover cov;
  cov.boundary = boundary_sample(d, opt.boundary_count, rng);

  // greedy farthest-point centers
  std::vector<std::size_t> centers{0};
  std::vector<double> dist(cov.boundary.size(), std::numeric_limits<double>::infinity());
  while (static_cast<int>(centers.size()) < patch_budget) {
    std::size_t far = 0;
    double fd = -1.0;
    for (std::size_t i = 0; i < cov.boundary.size(); ++i) {
      dist[i] = std::min(dist[i], vec_dist(cov.boundary[i], cov.boundary[centers.back()]));
      if (dist[i] > fd) {
        fd = dist[i];
        far = i;
      }
    }
    if (fd < 1e-12 * d.diam) break;  // sample exhausted
    centers.push_back(far);
  }
  for (std::size_t i = 0; i < cov.boundary.size(); ++i)
    dist[i] = std::min(dist[i], vec_dist(cov.boundary[i], cov.boundary[centers.back()]));
  const double covering_radius = *std::max_element(dist.begin(), dist.end());
  const double radius = std::max(1.5 * covering_radius, 1e-3 * d.diam);

  for (std::size_t c : centers) {
    CollarPatch p;
    p.center = cov.boundary[c];
    p.radius = radius;
    p.normal = inner_normal(d, p.center);
    const auto fr = tangent_frame(d, p.center);
    p.pivot = fr.pivot;
    cov.patches.push_back(std::move(p));
  }

  cov.nearest_patch.assign(cov.boundary.size(), 0);
  for (std::size_t i = 0; i < cov.boundary.size(); ++i) {
    double bd = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < cov.patches.size(); ++k) {
      const double dd = vec_dist(cov.boundary[i], cov.patches[k].center);
      if (dd < bd) {
        bd = dd;
        cov.nearest_patch[i] = static_cast<int>(k);
      }
    }
    if (bd > radius)
      throw CoverFailure("collar_cover: boundary sample not covered by any patch");
    cov.patches[cov.nearest_patch[i]].samples.push_back(static_cast<int>(i));
  }

  // per-patch collar depth by bisection on the membership condition
  cov.sigma = std::numeric_limits<double>::infinity();
  for (auto& p : cov.patches) {
    double s = opt.sigma_start;
    bool ok = false;
    while (s >= opt.sigma_floor) {
      if (detail::patch_sigma_ok(d, p, cov.boundary, s, d.epsilon, rng)) {
        ok = true;
        break;
      }
      s *= 0.5;
    }
    if (!ok) {
      s = opt.sigma_floor;
      cov.sigma_floor_hit = true;
      cov.warnings.push_back("sigma floor hit in patch near " + std::to_string(p.center[0].real()));
    }
    p.sigma_i = s;
    cov.sigma = std::min(cov.sigma, s);
  }

  // clearance A: sample Omega \ V, minimize distance to the boundary.
  // Points whose membership Newton diverges in every patch are skipped
  // (divergence is an error state, not a "not in V" verdict).
  double min_dist = std::numeric_limits<double>::infinity();
  int kept = 0;
  const int nu = opt.clearance_samples;
  for (int it = 0; it < nu; ++it) {
    CVec z(d.n);
    if (it % 2 == 0) {
      // uniform rejection inside the box
      for (int j = 0; j < d.n; ++j)
        z[j] = {rng.uniform(d.box[2 * j][0], d.box[2 * j][1]),
                rng.uniform(d.box[2 * j + 1][0], d.box[2 * j + 1][1])};
      if (d.r(z) >= 0.0) continue;
    } else {
      // inward offsets just past the collar depth
      const CVec& w = cov.boundary[rng.index(cov.boundary.size())];
      CVec nvec;
      try {
        nvec = inner_normal(d, w);
      } catch (const Error&) {
        continue;
      }
      const double depth = 0.5 * cov.sigma * (1.05 + rng.uniform() * 1.5);
      z = axpy(w, cplx(depth), nvec);
      if (d.r(z) >= 0.0) continue;
    }
    try {
      if (collar_membership(cov, d, z)) continue;  // in V
    } catch (const NewtonDivergence&) {
      continue;
    }
    const CVec& hint = cov.boundary[nearest_index(cov.boundary, z)];
    const double dist = distance_to_boundary(d, z, &hint);
    if (std::isfinite(dist)) {
      min_dist = std::min(min_dist, dist);
      ++kept;
    }
  }
  if (kept == 0) throw CoverFailure("collar_cover: no usable clearance samples");
  cov.clearance_A = 0.95 * min_dist;
  return cov;
}

namespace detail {

// Newton inverse of F_{w_k}(w, s) = w + (1-s) pi_w(n_{w_k}), with the
// boundary parametrized over the real tangent plane at the start point.
inline std::optional<CollarPoint> invert_in_patch(const Domain& d, const CollarCover& cov,
                                                  int patch_id, const CVec& z,
                                                  const CVec& w_start, double s_start) {
  const CollarPatch& patch = cov.patches[patch_id];
  const int n = d.n;
  const int m = 2 * n;

  // real-orthonormal tangent basis at w_start
  CVec g = d.gradient(w_start);
  const double gn = norm2(g);
  if (gn < gradient_floor(d)) return std::nullopt;
  std::vector<double> nu = to_real(g);
  for (auto& x : nu) x /= gn;
  std::vector<std::vector<double>> basis;
  for (int j = 0; j < m && static_cast<int>(basis.size()) < m - 1; ++j) {
    std::vector<double> u(m, 0.0);
    u[j] = 1.0;
    double c = 0.0;
    for (int k = 0; k < m; ++k) c += u[k] * nu[k];
    for (int k = 0; k < m; ++k) u[k] -= c * nu[k];
    for (const auto& b : basis) {
      double cb = 0.0;
      for (int k = 0; k < m; ++k) cb += u[k] * b[k];
      for (int k = 0; k < m; ++k) u[k] -= cb * b[k];
    }
    double un = 0.0;
    for (double x : u) un += x * x;
    un = std::sqrt(un);
    if (un < 1e-6) continue;
    for (auto& x : u) x /= un;
    basis.push_back(std::move(u));
  }
  if (static_cast<int>(basis.size()) != m - 1) return std::nullopt;

  auto boundary_point = [&](const std::vector<double>& x) -> std::optional<CVec> {
    CVec w = w_start;
    std::vector<double> wr = to_real(w);
    for (int k = 0; k < m - 1; ++k)
      for (int j = 0; j < m; ++j) wr[j] += x[k] * basis[k][j];
    try {
      return boundary_project(d, to_complex(wr));
    } catch (const Error&) {
      return std::nullopt;
    }
  };

  auto residual = [&](const std::vector<double>& x) -> std::optional<std::vector<double>> {
    const auto w = boundary_point(x);
    if (!w) return std::nullopt;
    const double s = x[m - 1];
    CVec F = axpy(*w, cplx(1.0 - s), project_onto_line(patch.normal, *w));
    std::vector<double> out = to_real(F - z);
    return out;
  };

  std::vector<double> x(m, 0.0);
  x[m - 1] = s_start;
  auto Fv = residual(x);
  if (!Fv) return std::nullopt;
  auto nrm = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double a : v) s += a * a;
    return std::sqrt(s);
  };
  double fn = nrm(*Fv);
  const double tol = 1e-10 * d.diam;
  const double h = 1e-7 * d.diam;

  for (int it = 0; it < 50 && fn > tol; ++it) {
    std::vector<std::vector<double>> J(m, std::vector<double>(m));
    bool jac_ok = true;
    for (int c = 0; c < m; ++c) {
      std::vector<double> xp = x;
      xp[c] += h;
      const auto Fp = residual(xp);
      if (!Fp) {
        jac_ok = false;
        break;
      }
      for (int rr = 0; rr < m; ++rr) J[rr][c] = ((*Fp)[rr] - (*Fv)[rr]) / h;
    }
    if (!jac_ok) return std::nullopt;
    std::vector<double> step;
    try {
      step = solve_real(J, *Fv);
    } catch (const SingularSystem&) {
      return std::nullopt;
    }
    double lam = 1.0;
    bool moved = false;
    for (int bt = 0; bt < 8; ++bt, lam *= 0.5) {
      std::vector<double> xn = x;
      for (int c = 0; c < m; ++c) xn[c] -= lam * step[c];
      const auto Fn = residual(xn);
      if (!Fn) continue;
      if (nrm(*Fn) < fn) {
        x = std::move(xn);
        Fv = Fn;
        fn = nrm(*Fv);
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  if (fn > tol * 10.0) return std::nullopt;

  const auto w = boundary_point(x);
  if (!w) return std::nullopt;
  CollarPoint cp;
  cp.w = *w;
  cp.patch_id = patch_id;
  cp.s = std::min(x[m - 1], 1.0);
  cp.residual = fn;
  if (vec_dist(*w, patch.center) > 1.02 * patch.radius) return std::nullopt;
  return cp;
}

}  // namespace detail

// Membership in V: returns the corresponding (w, w_k, s) when z lies in the
// half-sigma collar, none when it provably does not. NewtonDivergence when z
// sits close enough to the boundary that it must be in V but no patch inverts
// (chart seam). patch_hint, when >= 0, is tried first (keeps sequences of
// nearby points resolving in one patch).
inline std::optional<CollarPoint> collar_membership(const CollarCover& cov, const Domain& d,
                                                    const CVec& z, int patch_hint) {
  if (d.r(z) > d.boundary_tol())
    throw PointOutsideDomain("collar_membership: z outside the closed domain");
  const std::size_t near_id = nearest_index(cov.boundary, z);
  const CVec& w0 = cov.boundary[near_id];
  const double dist = distance_to_boundary(d, z, &w0);
  const double half_sigma = 0.5 * cov.sigma;
  if (dist > half_sigma * (1.0 + 1e-6)) return std::nullopt;

  // candidate patches, hint then nearest centers
  std::vector<std::pair<double, int>> cand;
  for (std::size_t k = 0; k < cov.patches.size(); ++k)
    cand.push_back({vec_dist(z, cov.patches[k].center), static_cast<int>(k)});
  std::sort(cand.begin(), cand.end());
  std::size_t tries = std::min<std::size_t>(4, cand.size());
  if (patch_hint >= 0 && patch_hint < static_cast<int>(cov.patches.size())) {
    cand.insert(cand.begin(), {0.0, patch_hint});
    ++tries;
  }

  bool any_converged = false;
  for (std::size_t t = 0; t < tries; ++t) {
    const int k = cand[t].second;
    if (cand[t].first > cov.patches[k].radius + cov.sigma) continue;
    auto cp = detail::invert_in_patch(d, cov, k, z, w0, 1.0 - dist);
    if (!cp) continue;
    any_converged = true;
    if (cp->s > 1.0 - half_sigma - 1e-12 && cp->s <= 1.0) return cp;
  }
  if (!any_converged && dist < 0.25 * cov.sigma)
    throw NewtonDivergence("collar_membership: no patch inverted near the boundary");
  return std::nullopt;
}

inline std::optional<CollarPoint> collar_membership(const CollarCover& cov, const Domain& d,
                                                    const CVec& z) {
  return collar_membership(cov, d, z, -1);
}

// ---- membership-bound sweep (the lemma1 experiment) ----

struct Lemma1Row {
  int patch = 0;
  double s = 0.0;
  double t_abs = 0.0;
  double margin = 0.0;  // -r/r_scale at the offset point
  bool inside = true;
};

struct Lemma1Report {
  std::vector<Lemma1Row> rows;          // stratified pass, feeds the s-bins
  std::vector<Lemma1Row> refined_rows;  // adaptive zoom pass
  long violations = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
  CVec worst_point;                      // boundary point of the worst row
  double s_lo = 0.0;                     // bins cover s in [s_lo, 1]
  std::vector<double> bin_min_margin;
  std::vector<long> bin_count;
};

// Samples (z, s, t, e) per patch and checks r(z + (1-s) pi_z(n_{w_i}) + t e) < 0.
// Pass 1 stratifies s-bins for the margin profile; pass 2 zooms toward the
// worst margin-to-depth ratio, hunting boundary regions where the bound fails.
inline Lemma1Report verify_lemma1(const Domain& d, const CollarCover& cov, int sample_count,
                                  std::uint64_t seed = 2, double eps_override = 0.0,
                                  int bins = 12) {
  Rng rng(seed);
  const double eps = eps_override > 0.0 ? eps_override : d.epsilon;
  const double expo = 1.0 / (1.0 + 0.5 * eps);
  const double spow = std::pow(cov.sigma, 1.0 + 0.5 * eps);
  Lemma1Report rep;
  rep.s_lo = 1.0 - spow;
  rep.bin_min_margin.assign(bins, std::numeric_limits<double>::infinity());
  rep.bin_count.assign(bins, 0);

  auto make_row = [&](const CVec& zb, int patch_id, double eta, Lemma1Row& row) -> bool {
    const CollarPatch& p = cov.patches[patch_id];
    BoundaryFrame fr;
    try {
      fr = tangent_frame(d, zb, p.pivot);
    } catch (const Error&) {
      return false;
    }
    CVec e = fr.tangents[rng.index(fr.tangents.size())];
    if (fr.tangents.size() > 1 && rng.uniform() < 0.5) {
      CVec mix(d.n, 0.0);
      for (const auto& t : fr.tangents) mix = axpy(mix, rng.unit_disc(), t);
      if (norm2(mix) > 1e-9) e = normalized(mix);
    }
    const double bound = std::pow(eta, expo);
    const double tmag = bound * 0.999 * std::pow(rng.uniform(), 0.25);
    const double ph = 2.0 * M_PI * rng.uniform();
    const cplx t = tmag * cplx(std::cos(ph), std::sin(ph));
    row.patch = patch_id;
    row.s = 1.0 - eta;
    row.t_abs = tmag;
    row.margin = detail::membership_margin(d, zb, p.normal, row.s, t, e);
    row.inside = row.margin > 0.0;
    return true;
  };

  auto account = [&](const Lemma1Row& row, const CVec& zb) {
    if (!row.inside) ++rep.violations;
    if (row.margin < rep.worst_margin) {
      rep.worst_margin = row.margin;
      rep.worst_point = zb;
    }
  };

  // pass 1: stratified over s-bins (plus a log tail in the last bin)
  const int n1 = sample_count / 2;
  for (int i = 0; i < n1; ++i) {
    const int sid = static_cast<int>(rng.index(cov.boundary.size()));
    const CVec& zb = cov.boundary[sid];
    const int patch_id = cov.nearest_patch[sid];
    double eta;
    int bin;
    if (i % 5 == 4) {  // log tail, deep into s -> 1
      eta = spow * std::pow(10.0, -7.0 * rng.uniform());
      bin = bins - 1;
    } else {
      bin = i % bins;
      const double lo = spow * (bins - 1 - bin) / bins;
      const double hi = spow * (bins - bin) / bins;
      eta = rng.uniform(lo, hi);
    }
    Lemma1Row row;
    if (!make_row(zb, patch_id, std::max(eta, 1e-14), row)) continue;
    rep.rows.push_back(row);
    account(row, zb);
    const int b = std::min(bins - 1, std::max(0, static_cast<int>((row.s - rep.s_lo) / spow * bins)));
    rep.bin_min_margin[b] = std::min(rep.bin_min_margin[b], row.margin);
    rep.bin_count[b] += 1;
  }

  // pass 2: zoom toward the worst margin/eta ratio at small eta
  const double eta_probe = spow * 1e-7;
  CVec focus = rep.worst_point.empty() ? cov.boundary[0] : rep.worst_point;
  double focus_ratio = std::numeric_limits<double>::infinity();
  const int rounds = 5;
  const int per_round = std::max(20, sample_count / (2 * rounds));
  for (int round = 0; round < rounds; ++round) {
    const double scale = 0.3 * d.diam * std::pow(10.0, -round);
    for (int i = 0; i < per_round; ++i) {
      CVec zb = focus;
      for (int j = 0; j < d.n; ++j) zb[j] += scale * rng.unit_disc();
      try {
        zb = boundary_project(d, zb);
      } catch (const Error&) {
        continue;
      }
      const int patch_id = cov.nearest_patch[nearest_index(cov.boundary, zb)];
      if (vec_dist(zb, cov.patches[patch_id].center) > cov.patches[patch_id].radius) continue;
      Lemma1Row row;
      const double eta = eta_probe * std::pow(10.0, 2.0 * rng.uniform());
      if (!make_row(zb, patch_id, eta, row)) continue;
      rep.refined_rows.push_back(row);
      account(row, zb);
      const double ratio = row.margin / (1.0 - row.s);
      if (ratio < focus_ratio) {
        focus_ratio = ratio;
        focus = zb;
      }
    }
  }
  return rep;
}

}  // namespace gleason
