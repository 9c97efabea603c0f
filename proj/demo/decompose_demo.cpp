// Minimal library walkthrough: decompose f(z) = z1 z2 + z2^2 on the unit
// ball three ways and print the T_i values with their residuals.

#include <cstdio>

#include "gleason/collar.hpp"
#include "gleason/domain.hpp"
#include "gleason/operators.hpp"

using namespace gleason;

int main() {
  const Domain ball = make_ball();
  const CollarCover cover = collar_cover(ball, 8);
  std::printf("ball cover: %zu patches, sigma = %.4f, A = %.4f\n", cover.patches.size(),
              cover.sigma, cover.clearance_A);

  const Polynomial P(2, {{{1, 1}, cplx(1.0)}, {{0, 2}, cplx(1.0)}});
  const auto f = HolomorphicOracle::from_polynomial(P, "z1 z2 + z2^2");

  const CVec z = {cplx(0.35, 0.1), cplx(-0.2, 0.4)};
  for (Method m : {Method::closed_form, Method::direct_contour, Method::approximant_limit}) {
    DecomposeOptions opt;
    opt.method = m;
    opt.approx_degree_hi = 4;
    const auto rep = decompose_at_point(f, z, ball, cover, opt);
    std::printf("%-18s T1 = %+.10f%+.10fi  T2 = %+.10f%+.10fi  residual %.2e\n",
                rep.method.c_str(), rep.values[0].real(), rep.values[0].imag(),
                rep.values[1].real(), rep.values[1].imag(), rep.residual);
  }

  // exact polynomial division at a shifted Gleason point
  const CVec p = {cplx(0.2, 0.0), cplx(0.1, -0.1)};
  const auto dec = decompose_polynomial(P, p, ball);
  std::printf("polynomial division remainder (relative): %.2e\n", dec.remainder_rel);
  return 0;
}
