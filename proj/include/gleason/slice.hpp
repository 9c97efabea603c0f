#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
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

// Raster of { lambda : r(a + lambda b) < 0 } over a square covering every
// lambda that can reach the bounding box.
struct SliceRegion {
  CVec a, b;
  double R = 0.0;  // grid covers [-R, R]^2
  int m = 0;
  std::vector<std::uint8_t> mask;  // row-major, 1 = inside
  bool empty = true;
  bool inside_touches_frame = false;

  cplx node(int p, int q) const {
    const double h = 2.0 * R / (m - 1);
    return {-R + p * h, -R + q * h};
  }
  bool at(int p, int q) const { return mask[static_cast<std::size_t>(q) * m + p] != 0; }
};

inline SliceRegion slice(const Domain& d, const CVec& a, const CVec& b, int resolution) {
  if (resolution < 64) throw DimensionMismatch("slice: resolution >= 64 required");
  if (std::fabs(norm2(b) - 1.0) > 1e-10) throw DegenerateDirection("slice: |b| != 1");
  SliceRegion reg;
  reg.a = a;
  reg.b = b;
  reg.m = resolution;

  double R = std::numeric_limits<double>::infinity();
  for (int j = 0; j < d.n; ++j) {
    const double bj = std::abs(b[j]);
    if (bj < 1e-12) continue;
    const double rad = std::max(std::fabs(d.box[2 * j][0]), std::fabs(d.box[2 * j][1]));
    const double irad = std::max(std::fabs(d.box[2 * j + 1][0]), std::fabs(d.box[2 * j + 1][1]));
    const double reach = std::hypot(rad, irad) + std::abs(a[j]);
    R = std::min(R, reach / bj);
  }
  if (!std::isfinite(R)) throw DegenerateDirection("slice: direction has no support");
  reg.R = 1.05 * R;

  reg.mask.assign(static_cast<std::size_t>(resolution) * resolution, 0);
  CVec p(d.n);
  for (int q = 0; q < resolution; ++q) {
    for (int pp = 0; pp < resolution; ++pp) {
      const cplx lam = reg.node(pp, q);
      for (int j = 0; j < d.n; ++j) p[j] = a[j] + lam * b[j];
      if (d.r(p) < 0.0) {
        reg.mask[static_cast<std::size_t>(q) * resolution + pp] = 1;
        reg.empty = false;
        if (pp == 0 || q == 0 || pp == resolution - 1 || q == resolution - 1)
          reg.inside_touches_frame = true;
      }
    }
  }
  return reg;
}

namespace detail {

// labels for value-matching pixels; conn4 for inside, conn8 for outside
inline int label_components(const SliceRegion& reg, std::uint8_t value, bool conn8,
                            std::vector<int>& labels, std::vector<long>& sizes) {
  const int m = reg.m;
  labels.assign(static_cast<std::size_t>(m) * m, -1);
  sizes.clear();
  int next = 0;
  std::deque<std::pair<int, int>> queue;
  for (int q0 = 0; q0 < m; ++q0)
    for (int p0 = 0; p0 < m; ++p0) {
      const std::size_t idx0 = static_cast<std::size_t>(q0) * m + p0;
      if (reg.mask[idx0] != value || labels[idx0] >= 0) continue;
      labels[idx0] = next;
      sizes.push_back(0);
      queue.push_back({p0, q0});
      while (!queue.empty()) {
        auto [p, q] = queue.front();
        queue.pop_front();
        sizes[next] += 1;
        for (int dq = -1; dq <= 1; ++dq)
          for (int dp = -1; dp <= 1; ++dp) {
            if (dp == 0 && dq == 0) continue;
            if (!conn8 && dp != 0 && dq != 0) continue;
            const int pn = p + dp, qn = q + dq;
            if (pn < 0 || qn < 0 || pn >= m || qn >= m) continue;
            const std::size_t idx = static_cast<std::size_t>(qn) * m + pn;
            if (reg.mask[idx] != value || labels[idx] >= 0) continue;
            labels[idx] = next;
            queue.push_back({pn, qn});
          }
      }
      ++next;
    }
  return next;
}

}  // namespace detail

struct SliceTopology {
  bool connected = true;
  bool simply_connected = true;
  bool empty = true;
  bool resolution_flag = false;  // some component under 4 pixels: untrusted
};

inline SliceTopology slice_topology(const SliceRegion& reg) {
  SliceTopology t;
  t.empty = reg.empty;
  if (reg.empty) return t;  // vacuous truth, flagged empty by convention
  std::vector<int> labels;
  std::vector<long> sizes;
  const int ncomp = detail::label_components(reg, 1, false, labels, sizes);
  t.connected = ncomp <= 1;
  for (long s : sizes)
    if (s < 4) t.resolution_flag = true;

  std::vector<int> olabels;
  std::vector<long> osizes;
  const int nout = detail::label_components(reg, 0, true, olabels, osizes);
  std::vector<char> touches(nout, 0);
  const int m = reg.m;
  for (int p = 0; p < m; ++p) {
    for (int q : {0, m - 1}) {
      if (!reg.at(p, q)) touches[olabels[static_cast<std::size_t>(q) * m + p]] = 1;
      if (!reg.at(q, p)) touches[olabels[static_cast<std::size_t>(p) * m + q]] = 1;
    }
  }
  int frame_comps = 0, bounded = 0;
  for (int k = 0; k < nout; ++k) {
    if (touches[k])
      ++frame_comps;
    else {
      ++bounded;
      if (osizes[k] < 4) t.resolution_flag = true;
    }
  }
  t.simply_connected = frame_comps == 1 && bounded == 0;
  return t;
}

inline bool is_connected(const SliceRegion& reg) { return slice_topology(reg).connected; }
inline bool is_simply_connected(const SliceRegion& reg) { return slice_topology(reg).simply_connected; }

// ---- transversality ----

struct Crossing {
  cplx lambda;
  double defect = 0.0;      // |sum_j dr/dz_j(w) b_j|
  double grad_norm = 0.0;   // |dbar r(w)|
};

struct TransversalityReport {
  std::vector<Crossing> crossings;
  double min_defect_rel = std::numeric_limits<double>::infinity();
  bool transversal = false;
};

inline TransversalityReport check_transversality(const Domain& d, const CVec& a, const CVec& b,
                                                 int resolution = 128) {
  const SliceRegion reg = slice(d, a, b, resolution);
  if (reg.empty) throw NoCrossing("check_transversality: empty slice");
  TransversalityReport rep;
  CVec p(d.n);
  auto rof = [&](cplx lam) {
    for (int j = 0; j < d.n; ++j) p[j] = a[j] + lam * b[j];
    return d.r(p);
  };
  auto refine = [&](cplx l0, cplx l1) -> std::optional<cplx> {
    double r0 = rof(l0);
    for (int it = 0; it < 100; ++it) {
      const cplx mid = 0.5 * (l0 + l1);
      const double rm = rof(mid);
      if (std::fabs(rm) < 1e-10) return mid;
      if ((r0 < 0.0) != (rm < 0.0))
        l1 = mid;
      else {
        l0 = mid;
        r0 = rm;
      }
    }
    return std::nullopt;
  };
  const int m = reg.m;
  for (int q = 0; q < m; ++q)
    for (int pp = 0; pp < m; ++pp) {
      for (int dir = 0; dir < 2; ++dir) {
        const int pn = pp + (dir == 0 ? 1 : 0), qn = q + (dir == 0 ? 0 : 1);
        if (pn >= m || qn >= m) continue;
        if (reg.at(pp, q) == reg.at(pn, qn)) continue;
        const auto lam = refine(reg.node(pp, q), reg.node(pn, qn));
        if (!lam) continue;
        Crossing c;
        c.lambda = *lam;
        for (int j = 0; j < d.n; ++j) p[j] = a[j] + *lam * b[j];
        const CVec db = d.wirtinger(p);
        c.defect = std::abs(dot_bilinear(db, b));
        c.grad_norm = norm2(db);
        if (c.grad_norm > 1e-14)
          rep.min_defect_rel = std::min(rep.min_defect_rel, c.defect / c.grad_norm);
        rep.crossings.push_back(c);
      }
    }
  if (rep.crossings.empty()) throw NoCrossing("check_transversality: no boundary crossing found");
  rep.transversal = rep.min_defect_rel > 1e-6;
  return rep;
}

// ---- the certificate ----

struct LineResult {
  int id = 0;
  CVec a, b;
  bool empty = false;
  bool connected = true;
  bool simply_connected = true;
  bool transversal = true;
  bool flagged = false;
  double min_defect_rel = std::numeric_limits<double>::infinity();
};

struct CConvexityCertificate {
  enum class Verdict { PASS, FAIL, INCONCLUSIVE } verdict = Verdict::PASS;
  std::vector<LineResult> lines;
  int witness = -1;  // line id of the first failure
  int nonempty = 0;  // certificate denominator
};

inline LineResult check_line(const Domain& d, const CVec& a, const CVec& b, int resolution) {
  LineResult lr;
  lr.a = a;
  lr.b = b;
  const SliceRegion reg = slice(d, a, b, resolution);
  const SliceTopology topo = slice_topology(reg);
  lr.empty = topo.empty;
  lr.flagged = topo.resolution_flag;
  lr.connected = topo.connected;
  lr.simply_connected = topo.simply_connected;
  if (!lr.empty) {
    try {
      const auto tv = check_transversality(d, a, b, std::min(resolution, 160));
      lr.transversal = tv.transversal;
      lr.min_defect_rel = tv.min_defect_rel;
    } catch (const NoCrossing&) {
      lr.transversal = true;  // nothing to cross
    }
  }
  return lr;
}

inline CConvexityCertificate check_cconvex(const Domain& d, int n_lines, int resolution,
                                           std::uint64_t seed = 3) {
  Rng rng(seed);
  CConvexityCertificate cert;
  std::vector<CVec> interior;
  while (interior.size() < 64) {
    CVec z(d.n);
    for (int j = 0; j < d.n; ++j)
      z[j] = {rng.uniform(d.box[2 * j][0], d.box[2 * j][1]),
              rng.uniform(d.box[2 * j + 1][0], d.box[2 * j + 1][1])};
    if (d.r(z) < -0.02 * d.r_scale) interior.push_back(std::move(z));
  }
  std::vector<CVec> nearb = boundary_sample(d, 64, rng);
  for (auto& w : nearb) {  // pull slightly inside so chords are fat
    const CVec nv = inner_normal(d, w);
    w = axpy(w, cplx(0.05 * d.diam), nv);
  }

  for (int id = 0; id < n_lines; ++id) {
    CVec a(d.n, 0.0), b;
    if (id < d.n) {
      b = CVec(d.n, 0.0);
      b[id] = 1.0;  // coordinate directions through the Gleason point
    } else if (id % 4 == 0) {
      b = normalized(to_complex(rng.sphere(2 * d.n)));
    } else {
      a = interior[rng.index(interior.size())];
      const CVec& q = nearb[rng.index(nearb.size())];
      if (norm2(q - a) < 1e-9) continue;
      b = normalized(q - a);
    }
    LineResult lr = check_line(d, a, b, resolution);
    lr.id = id;
    if (!lr.empty) ++cert.nonempty;
    const bool fail = !lr.empty && (!lr.connected || !lr.simply_connected || !lr.transversal);
    if (fail && cert.witness < 0) cert.witness = static_cast<int>(cert.lines.size());
    cert.lines.push_back(std::move(lr));
  }
  bool any_fail = false, any_flag = false;
  for (const auto& lr : cert.lines) {
    if (!lr.empty && (!lr.connected || !lr.simply_connected || !lr.transversal)) any_fail = true;
    if (!lr.empty && lr.flagged) any_flag = true;
  }
  cert.verdict = any_fail ? CConvexityCertificate::Verdict::FAIL
                          : (any_flag ? CConvexityCertificate::Verdict::INCONCLUSIVE
                                      : CConvexityCertificate::Verdict::PASS);
  return cert;
}

}  // namespace gleason
