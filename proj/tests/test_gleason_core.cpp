#include <Eigen/Dense>
#include <catch2/catch_amalgamated.hpp>

#include "fixtures.hpp"
#include "gleason/fitting.hpp"
#include "gleason/operators.hpp"
#include "helpers.hpp"

using gleason::cplx;
using gleason::CVec;
using gleason::HolomorphicOracle;
using gleason::Polynomial;

namespace {

HolomorphicOracle poly_oracle(const Polynomial& p) {
  return HolomorphicOracle::from_polynomial(p, "test-poly");
}

HolomorphicOracle rational_ball_oracle(double scale = 1.0) {
  HolomorphicOracle o;
  o.name = "z1/(2-z2)";
  o.validity_margin = 0.4;
  o.f = [scale](const CVec& z) { return scale * z[0] / (2.0 - z[1]); };
  return o;
}

}  // namespace

TEST_CASE("cauchy directional derivative on known functions") {
  const auto& ball = gt::ball();
  // f = z1^2 at center (1,0), direction (1,0): d/dt (1+t)^2 = 2
  auto f1 = poly_oracle(Polynomial::monomial({2, 0}, 1.0));
  CHECK(gt::approx(gleason::cauchy_directional_derivative(f1, ball, gt::pt(1, 0), gt::pt(1, 0), 0.3),
                   2.0, 1e-11));
  // f = z1 z2 at (1/2, 1/2), direction (0,1): 1/2
  auto f2 = poly_oracle(Polynomial::monomial({1, 1}, 1.0));
  CHECK(gt::approx(
      gleason::cauchy_directional_derivative(f2, ball, gt::pt(0.5, 0.5), gt::pt(0, 1), 0.2),
      0.5, 1e-12));
  // rational: d/dz1 [z1/(2-z2)] at (0.5, 0.5) = 1/1.5
  auto f3 = rational_ball_oracle();
  CHECK(gt::approx(
      gleason::cauchy_directional_derivative(f3, ball, gt::pt(0.5, 0.5), gt::pt(1, 0), 0.3),
      1.0 / 1.5, 1e-11));
}

TEST_CASE("cauchy derivative guards its circle") {
  const auto& ball = gt::ball();
  auto f = rational_ball_oracle();
  f.validity_margin = 0.0;  // confine to the closed domain
  CHECK_THROWS_AS(
      gleason::cauchy_directional_derivative(f, ball, gt::pt(0.9, 0.0), gt::pt(1, 0), 0.5),
      gleason::CircleExitsDomain);
  CHECK_THROWS_AS(
      gleason::cauchy_directional_derivative(f, ball, gt::pt(0.5, 0.0), gt::pt(1, 0), 0.1, 8),
      gleason::DimensionMismatch);
}

TEST_CASE("integrate_I reproduces the closed form (interior and collar)") {
  const auto& ball = gt::ball();
  const auto& cov = gt::ball_cover();
  gleason::Rng rng(314);

  const Polynomial P(2, {{{2, 0}, cplx(1.0, 0.3)}, {{1, 1}, cplx(-0.5, 0.2)}, {{0, 3}, cplx(0.25)}});
  const auto f = poly_oracle(P);

  // interior point
  {
    const CVec z = gt::pt(0.45, 0.25);
    const auto plan = gleason::plan_path(ball, cov, z);
    for (int i = 0; i < 2; ++i) {
      CVec e(2, 0.0);
      e[i] = 1.0;
      const cplx got = gleason::integrate_I(f, z, e, plan, ball, cov);
      const cplx want = P.leibenzon(i).eval(z);
      CHECK(std::abs(got - want) < 1e-8);
    }
  }
  // collar point: tangent directions against the closed form combination
  {
    CVec z = cov.boundary[3];
    for (auto& x : z) x *= (1.0 - 0.2 * cov.sigma);
    const auto plan = gleason::plan_path(ball, cov, z);
    REQUIRE(plan.kind == gleason::PathPlan::Kind::collar);
    const auto frame = gleason::tangent_frame(ball, plan.w, cov.patches[plan.patch_id].pivot);
    const cplx got = gleason::integrate_I(f, z, frame.tangents[0], plan, ball, cov);
    cplx want = 0.0;
    for (int i = 0; i < 2; ++i) want += frame.tangents[0][i] * P.leibenzon(i).eval(z);
    CHECK(std::abs(got - want) < 1e-8);
  }
  // path independence: a detour plan gives the same integral
  {
    const CVec z = gt::pt(0.2, 0.5);
    const auto plan1 = gleason::plan_path(ball, cov, z);
    const auto plan2 = gleason::plan_path_variant(ball, cov, z, rng);
    CVec e = gt::pt(1.0, 0.0);
    const cplx a = gleason::integrate_I(f, z, e, plan1, ball, cov);
    const cplx b = gleason::integrate_I(f, z, e, plan2, ball, cov);
    CHECK(std::abs(a - b) < 1e-8);
  }
  // zero function integrates to zero
  {
    HolomorphicOracle zero;
    zero.name = "zero";
    zero.validity_margin = std::numeric_limits<double>::infinity();
    zero.f = [](const CVec&) { return cplx(0.0); };
    const CVec z = gt::pt(0.3, 0.1);
    const auto plan = gleason::plan_path(ball, cov, z);
    CHECK(std::abs(gleason::integrate_I(zero, z, gt::pt(0, 1), plan, ball, cov)) < 1e-14);
  }
}

TEST_CASE("solve_SY recovers the closed-form values") {
  const auto& ball = gt::ball();
  // frame e1 = (0,1) at w = (1,0), z = (0.9, 0), f = z1^2
  gleason::BoundaryFrame fr;
  fr.base_point = gt::pt(1.0, 0.0);
  fr.inner_normal = gt::pt(-1.0, 0.0);
  fr.tangents = {gt::pt(0.0, 1.0)};
  const CVec z = gt::pt(0.9, 0.0);
  double det = 0.0;
  const auto x = gleason::solve_SY(fr, z, {cplx(0.0), cplx(0.81)}, &det);
  CHECK(gt::approx(x[0], 0.9, 1e-12));
  CHECK(gt::approx(x[1], 0.0, 1e-12));
  CHECK(det == Catch::Approx(0.9));

  // identity row: sum z_i x_i = f(z) holds exactly as an equation of the system
  cplx sum = 0.0;
  for (int i = 0; i < 2; ++i) sum += z[i] * x[i];
  CHECK(gt::approx(sum, 0.81, 1e-13));
  (void)ball;
}

TEST_CASE("cramer matches an independent dense solve") {
  gleason::Rng rng(2718);
  for (int rep = 0; rep < 25; ++rep) {
    gleason::CMat m(3, CVec(3));
    Eigen::Matrix3cd em;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) {
        m[r][c] = rng.unit_disc() + (r == c ? cplx(2.0) : cplx(0.0));
        em(r, c) = m[r][c];
      }
    CVec rhs(3);
    Eigen::Vector3cd erhs;
    for (int r = 0; r < 3; ++r) {
      rhs[r] = rng.unit_disc();
      erhs(r) = rhs[r];
    }
    const CVec x = gleason::cramer_solve(m, rhs);
    const Eigen::Vector3cd ex = em.fullPivLu().solve(erhs);
    for (int r = 0; r < 3; ++r) CHECK(std::abs(x[r] - ex(r)) < 1e-10);
  }
}

TEST_CASE("solve_SY flags singular systems") {
  gleason::BoundaryFrame fr;
  fr.tangents = {gt::pt(1.0, 0.0)};
  CHECK_THROWS_AS(gleason::solve_SY(fr, gt::pt(1.0, 1e-12), {cplx(0), cplx(0)}, nullptr),
                  gleason::SingularSystem);
}

TEST_CASE("decompose_polynomial: closed forms and exact remainders") {
  const auto& ball = gt::ball();
  // P = z1^2 at p = 0 -> (z1, 0)
  auto dec = gleason::decompose_polynomial(Polynomial::monomial({2, 0}, 1.0), gt::pt(0, 0), ball);
  CHECK(dec.parts[0] == Polynomial::monomial({1, 0}, 1.0));
  CHECK(dec.parts[1].is_zero());
  CHECK(dec.remainder_rel < 1e-15);

  // P = z1 z2 at p = (a, b): f1 = (z2 + b)/2
  const cplx a(0.2, 0.1), b(-0.3, 0.25);
  dec = gleason::decompose_polynomial(Polynomial::monomial({1, 1}, 1.0), {a, b}, ball);
  const Polynomial want =
      Polynomial(2, {{{0, 1}, cplx(0.5)}, {{0, 0}, 0.5 * b}});
  CHECK((dec.parts[0] - want).coeff_linf() < 1e-14);
  CHECK(dec.remainder_rel < 1e-14);

  // constant P -> all parts zero
  dec = gleason::decompose_polynomial(Polynomial::constant(2, cplx(3.0, -1.0)), gt::pt(0.1, 0.1), ball);
  CHECK(dec.parts[0].is_zero());
  CHECK(dec.parts[1].is_zero());

  CHECK_THROWS_AS(
      gleason::decompose_polynomial(Polynomial::monomial({1, 0}, 1.0), gt::pt(3.0, 0.0), ball),
      gleason::PointOutsideDomain);
}

TEST_CASE("decompose_polynomial: random identity sweep") {
  const auto& ball = gt::ball();
  gleason::Rng rng(5050);
  for (int rep = 0; rep < 25; ++rep) {
    const int n = rep % 2 == 0 ? 2 : 3;
    const gleason::Domain dom = n == 2 ? ball : gleason::make_ball(1.0, CVec(3, 0.0), "ball3");
    const int deg = 1 + static_cast<int>(rng.uniform() * 14);
    const Polynomial P = gt::random_poly(n, deg, rng, false);
    CVec p(n);
    for (int j = 0; j < n; ++j) p[j] = 0.4 * rng.unit_disc();
    const auto dec = gleason::decompose_polynomial(P, p, dom);
    CHECK(dec.remainder_rel < 1e-12);
  }
}

TEST_CASE("decompose_at_point: methods agree on polynomials") {
  const auto& ball = gt::ball();
  const auto& cov = gt::ball_cover();
  const Polynomial P(2, {{{2, 0}, cplx(0.8, -0.1)}, {{1, 1}, cplx(0.4, 0.4)}, {{0, 2}, cplx(-0.3)}});
  const auto f = poly_oracle(P);
  gleason::DecomposeOptions opt;

  // interior point: closed_form vs direct_contour vs approximant_limit
  {
    const CVec z = gt::pt(0.4, -0.2);
    opt.method = gleason::Method::closed_form;
    const auto rc = gleason::decompose_at_point(f, z, ball, cov, opt);
    opt.method = gleason::Method::direct_contour;
    const auto rd = gleason::decompose_at_point(f, z, ball, cov, opt);
    opt.method = gleason::Method::approximant_limit;
    opt.approx_degree_lo = 1;
    opt.approx_degree_hi = 4;
    const auto ra = gleason::decompose_at_point(f, z, ball, cov, opt);
    for (int i = 0; i < 2; ++i) {
      CHECK(std::abs(rc.values[i] - rd.values[i]) < 1e-7);
      CHECK(std::abs(rc.values[i] - ra.values[i]) < 1e-7);
    }
    CHECK(rc.ok);
    CHECK(rd.ok);
    CHECK(ra.ok);
  }
  // collar point: closed_form vs sy_system
  {
    CVec z = cov.boundary[7];
    for (auto& x : z) x *= (1.0 - 0.2 * cov.sigma);
    opt = {};
    opt.method = gleason::Method::sy_system;
    const auto rs = gleason::decompose_at_point(f, z, ball, cov, opt);
    opt.method = gleason::Method::closed_form;
    const auto rc = gleason::decompose_at_point(f, z, ball, cov, opt);
    for (int i = 0; i < 2; ++i) CHECK(std::abs(rs.values[i] - rc.values[i]) < 1e-7);
    CHECK(rs.ok);
    CHECK(rs.det_abs >= 1e-6);
  }
  // method gating
  {
    CVec z = cov.boundary[9];
    for (auto& x : z) x *= (1.0 - 0.2 * cov.sigma);
    opt = {};
    opt.method = gleason::Method::direct_contour;
    CHECK_THROWS_AS(gleason::decompose_at_point(f, z, ball, cov, opt),
                    gleason::MethodInapplicable);
    opt.method = gleason::Method::sy_system;
    CHECK_THROWS_AS(gleason::decompose_at_point(f, gt::pt(0.1, 0.1), ball, cov, opt),
                    gleason::MethodInapplicable);
  }
}

TEST_CASE("decompose_at_point at and near the origin") {
  const auto& ball = gt::ball();
  const auto& cov = gt::ball_cover();
  const auto f = rational_ball_oracle();
  // T_i(f)(0) = D_i f(0): (1/2, 0)
  auto rep = gleason::decompose_at_point(f, gt::pt(0.0, 0.0), ball, cov);
  CHECK(std::abs(rep.values[0] - 0.5) < 1e-10);
  CHECK(std::abs(rep.values[1]) < 1e-10);
  // tiny |z|: straight-segment formula, residual self-check
  rep = gleason::decompose_at_point(f, gt::pt(5e-4, 2e-4), ball, cov);
  CHECK(rep.ok);
}

TEST_CASE("rational oracle near the boundary: sy residual self-check") {
  const auto& ball = gt::ball();
  const auto& cov = gt::ball_cover();
  const auto f = rational_ball_oracle();
  // z near (0, 1), inside the collar
  CVec z = gleason::boundary_project(ball, gt::pt(0.02, 0.995));
  for (auto& x : z) x *= (1.0 - 0.2 * cov.sigma);
  gleason::DecomposeOptions opt;
  opt.method = gleason::Method::sy_system;
  const auto rep = gleason::decompose_at_point(f, z, ball, cov, opt);
  CHECK(rep.residual < 1e-7 * (1.0 + std::abs(f(z))));
  CHECK(rep.det_abs > 1e-6);
}

TEST_CASE("pointwise linearity across oracles") {
  const auto& ball = gt::ball();
  const auto& cov = gt::ball_cover();
  const Polynomial P(2, {{{1, 0}, cplx(1.0)}, {{0, 2}, cplx(0.6, 0.2)}});
  const auto fp = poly_oracle(P);
  const auto fr = rational_ball_oracle();
  const cplx a(0.7, -0.2), b(-0.4, 0.5);
  HolomorphicOracle mix;
  mix.name = "a*poly + b*rational";
  mix.validity_margin = 0.4;
  mix.f = [=](const CVec& z) { return a * fp(z) + b * fr(z); };

  const CVec z = gt::pt(0.35, 0.4);
  const auto rm = gleason::decompose_at_point(mix, z, ball, cov);
  const auto rp = gleason::decompose_at_point(fp, z, ball, cov);
  const auto rr = gleason::decompose_at_point(fr, z, ball, cov);
  for (int i = 0; i < 2; ++i)
    CHECK(std::abs(rm.values[i] - (a * rp.values[i] + b * rr.values[i])) < 1e-8);
}

TEST_CASE("fit_approximant reproduces polynomials and converges geometrically") {
  const auto& ball = gt::ball();
  const auto S = gleason::interior_sample(ball, 260, 99);
  // exact recovery of a polynomial of fitting degree
  const Polynomial P(2, {{{1, 0}, cplx(0.3, 0.1)}, {{2, 1}, cplx(-0.2, 0.6)}});
  auto fitP = gleason::fit_approximant([&](const CVec& z) { return P.eval(z); }, S, 3);
  CHECK(fitP.rms_residual < 1e-10);
  CHECK((fitP.poly - P).coeff_linf() < 1e-9);
  CHECK(fitP.poly.vanishes_at_origin());

  // f = z1/(2 - z2): the fit must beat the truncated geometric series in L2(S)
  auto f = [](const CVec& z) { return z[0] / (2.0 - z[1]); };
  double prev_rms = 1e9;
  for (int d = 2; d <= 8; ++d) {
    const auto fit = gleason::fit_approximant(f, S, d);
    // truncated series sum_{m<=d-1} z1 z2^m / 2^{m+1}
    double tr2 = 0.0;
    for (const auto& s : S) {
      cplx tv = 0.0;
      cplx zp = s[0];
      for (int m = 0; m <= d - 1; ++m) {
        tv += zp / std::pow(2.0, m + 1);
        zp *= s[1];
      }
      tr2 += std::norm(f(s) - tv);
    }
    const double tr_rms = std::sqrt(tr2 / S.size());
    CHECK(fit.rms_residual <= tr_rms + 1e-14);
    CHECK(fit.rms_residual <= prev_rms + 1e-14);
    prev_rms = fit.rms_residual;
  }
}

TEST_CASE("fit_approximant demands enough samples") {
  const auto& ball = gt::ball();
  const auto S = gleason::interior_sample(ball, 5, 7);
  CHECK_THROWS_AS(gleason::fit_approximant([](const CVec& z) { return z[0]; }, S, 3),
                  gleason::DimensionMismatch);
}

TEST_CASE("estimate_K: coordinate polynomial gives ratio exactly 1") {
  // S with sup |z_i| = 1 attained: the coordinate ratio is exactly 1
  const gleason::Domain big = gleason::make_ball(1.3);
  gleason::Rng rng(808);
  std::vector<CVec> S = {gt::pt(1.0, 0.0), gt::pt(0.0, 1.0)};
  for (int k = 0; k < 60; ++k) {
    auto u = rng.sphere(4);
    S.push_back({cplx(u[0], u[1]), cplx(u[2], u[3])});
  }
  gleason::BallSpec B{gt::pt(0.0, 0.0), 0.3};
  const auto bpts = gleason::sample_ball(B, 50, rng);
  for (int i = 0; i < 2; ++i) {
    const Polynomial P = Polynomial::coordinate(2, i);
    double supS = 0.0;
    for (const auto& s : S) supS = std::max(supS, std::abs(P.eval(s)));
    double ratio = 0.0;
    for (int j = 0; j < 2; ++j) {
      const Polynomial Tj = P.leibenzon(j);
      double supB = 0.0;
      for (const auto& z : bpts) supB = std::max(supB, std::abs(Tj.eval(z)));
      ratio = std::max(ratio, supB / supS);
    }
    CHECK(ratio == 1.0);
  }
  (void)big;
}

TEST_CASE("estimate_K on the ball: no growth trend across degrees") {
  const auto& ball = gt::ball();
  const auto& cov = gt::ball_cover();
  gleason::BallSpec B{gt::pt(0.0, 0.0), 0.3};
  const auto S = gleason::build_recipe_S(ball, cov, B, 1e-3 * ball.r_scale);
  const auto table = gleason::estimate_K(ball, cov, B, S, {1, 3, 5, 7, 9}, 12, 606);
  REQUIRE(table.per_degree.size() == 5);
  // least squares slope of log(ratio) vs degree
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [deg, ratio] : table.per_degree) {
    sx += deg;
    sy += std::log(ratio);
    sxx += deg * deg;
    sxy += deg * std::log(ratio);
  }
  const double nn = table.per_degree.size();
  const double slope = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
  CHECK(slope <= 0.02);
}

TEST_CASE("continuity experiment: constant sequence and decay") {
  const auto& ball = gt::ball();
  const auto& cov = gt::ball_cover();
  const Polynomial P(2, {{{1, 1}, cplx(0.5)}});
  const auto f = poly_oracle(P);

  CVec z = cov.boundary[5];
  for (auto& x : z) x *= (1.0 - 0.1 * cov.sigma);

  // constant sequence: all deltas vanish
  auto rows = gleason::continuity_experiment(f, z, {z, z}, ball, cov);
  for (const auto& r : rows) {
    CHECK(r.delta_I < 1e-12);
    CHECK(r.delta_T < 1e-12);
  }

  // radial sequence z_n -> z staying well inside the collar: first-order decay
  std::vector<CVec> zs;
  for (int k = 5; k <= 9; ++k) {
    CVec zn = z;
    const double t = std::pow(2.0, -k) * cov.sigma / gleason::norm2(z);
    for (auto& x : zn) x *= (1.0 - t);
    zs.push_back(std::move(zn));
  }
  rows = gleason::continuity_experiment(f, z, zs, ball, cov);
  for (std::size_t k = 1; k < rows.size(); ++k) {
    CHECK(rows[k].delta_T <= rows[k - 1].delta_T * 0.75 + 1e-12);
    CHECK(rows[k].delta_I <= rows[k - 1].delta_I * 0.9 + 1e-9);
  }
}
