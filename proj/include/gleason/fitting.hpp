#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <vector>

#include "gleason/domain.hpp"
#include "gleason/errors.hpp"
#include "gleason/lin.hpp"
#include "gleason/polynomial.hpp"
#include "gleason/rng.hpp"

namespace gleason {

using SampleSet = std::vector<CVec>;

// Seeded rejection sample of { r <= -delta }; the fixed compact the
// approximant sequence is fitted on.
inline SampleSet interior_sample(const Domain& d, std::size_t count, std::uint64_t seed,
                                 double delta_frac = 1e-3) {
  Rng rng(seed);
  SampleSet out;
  const double delta = delta_frac * d.r_scale;
  std::size_t guard = 0;
  while (out.size() < count && guard++ < 400 * count) {
    CVec z(d.n);
    for (int j = 0; j < d.n; ++j)
      z[j] = {rng.uniform(d.box[2 * j][0], d.box[2 * j][1]),
              rng.uniform(d.box[2 * j + 1][0], d.box[2 * j + 1][1])};
    if (d.r(z) <= -delta) out.push_back(std::move(z));
  }
  if (out.size() < count) throw CoverFailure("interior_sample: rejection failed");
  return out;
}

struct FitResult {
  Polynomial poly;       // vanishes at 0 exactly (no constant column)
  double rms_residual = 0.0;
  double sup_residual = 0.0;
  double cond_estimate = 0.0;
};

// Least squares fit of degree d over S, constrained to vanish at the origin
// by dropping the constant monomial. QR on the Vandermonde-style matrix.
inline FitResult fit_approximant(const std::function<cplx(const CVec&)>& f, const SampleSet& S,
                                 int degree) {
  if (S.empty()) throw DimensionMismatch("fit_approximant: empty sample set");
  const int n = static_cast<int>(S[0].size());
  const auto alphas = monomials_vanishing(n, degree);
  const std::size_t k = alphas.size();
  if (S.size() < monomial_count(n, degree))
    throw DimensionMismatch("fit_approximant: need at least C(n+d, d) sample points");

  Eigen::MatrixXcd V(S.size(), k);
  Eigen::VectorXcd y(S.size());
  for (std::size_t r = 0; r < S.size(); ++r) {
    y(r) = f(S[r]);
    for (std::size_t c = 0; c < k; ++c) {
      cplx m = 1.0;
      for (int j = 0; j < n; ++j)
        for (int e = 0; e < alphas[c][j]; ++e) m *= S[r][j];
      V(r, c) = m;
    }
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(V);
  const auto& R = qr.matrixR();
  const double r0 = std::abs(R(0, 0));
  const double rk = std::abs(R(k - 1, k - 1));
  FitResult out;
  out.cond_estimate = rk > 0.0 ? r0 / rk : std::numeric_limits<double>::infinity();
  if (out.cond_estimate > 1e12)
    throw IllConditioned("fit_approximant: condition estimate " +
                         std::to_string(out.cond_estimate));
  const Eigen::VectorXcd coef = qr.solve(y);

  std::vector<Polynomial::Term> terms;
  terms.reserve(k);
  for (std::size_t c = 0; c < k; ++c) terms.push_back({alphas[c], coef(c)});
  out.poly = Polynomial(n, std::move(terms));

  const Eigen::VectorXcd resid = V * coef - y;
  out.rms_residual = std::sqrt(resid.squaredNorm() / static_cast<double>(S.size()));
  out.sup_residual = resid.cwiseAbs().maxCoeff();
  return out;
}

}  // namespace gleason
