#include <catch2/catch_amalgamated.hpp>

#include "fixtures.hpp"
#include "gleason/pathplan.hpp"
#include "helpers.hpp"

using gleason::cplx;
using gleason::CVec;
using gleason::PathPlan;

TEST_CASE("mu on the ball is radial") {
  const auto& ball = gt::ball();
  const double delta = 0.05;
  const CVec z = gt::pt(1.0 - delta, 0.0);
  const CVec w = gt::pt(1.0, 0.0);
  const cplx m = gleason::mu(z, w, w, ball);
  CHECK(gt::approx(m, cplx(-1.0 / (1.0 - delta)), 1e-10));

  // pi_w(n) orthogonal to z: defect case
  CHECK_THROWS_AS(gleason::mu(gt::pt(0.0, 0.3), w, w, ball), gleason::NotCollinear);
}

TEST_CASE("interior plan on a convex domain is the straight segment") {
  const auto& ball = gt::ball();
  const auto& cov = gt::ball_cover();
  const CVec z = gt::pt(0.4, 0.3);  // far from the collar
  const PathPlan plan = gleason::plan_path(ball, cov, z);
  CHECK(plan.kind == PathPlan::Kind::interior);
  REQUIRE(plan.nodes.size() == 2);  // convex reduction
  CHECK(gt::approx(plan.nodes[0], 0.0));
  CHECK(gt::approx(plan.nodes[1], 1.0));
  CHECK(plan.clearance >= cov.clearance_A * (1.0 - 1e-3));
  CHECK(std::abs(plan.point(0.0)) < 1e-12);
  CHECK(std::abs(plan.point(1.0) - 1.0) < 1e-12);
}

TEST_CASE("collar plan walks the projected normal") {
  const auto& ball = gt::ball();
  const auto& cov = gt::ball_cover();
  const double delta = 0.25 * cov.sigma;
  CVec w = cov.boundary[0];  // genuine boundary point of the sample
  CVec z = w;
  for (auto& x : z) x *= (1.0 - delta);

  const PathPlan plan = gleason::plan_path(ball, cov, z);
  REQUIRE(plan.kind == PathPlan::Kind::collar);
  CHECK(plan.sigma_half == 0.5 * cov.sigma);

  // gamma(s) z = z + (1-s) pi_w(n_{w_k}) on the collar stretch
  const CVec pi = gleason::project_onto_line(
      gleason::inner_normal(ball, cov.patches[plan.patch_id].center), plan.w);
  for (double s : {1.0 - plan.sigma_half, 1.0 - 0.5 * plan.sigma_half, 1.0}) {
    const CVec got = plan.point_in_domain(s);
    CVec want = z;
    for (std::size_t j = 0; j < want.size(); ++j) want[j] += (1.0 - s) * pi[j];
    CHECK(gleason::vec_dist(got, want) < 1e-10);
  }
  CHECK(std::abs(plan.point(1.0) - 1.0) < 1e-12);
}

TEST_CASE("annulus product: segment exits, planned path clears the hole") {
  const auto& ann = gt::annulus();
  const auto& cov = gt::annulus_cover();
  const CVec z = gt::pt(1.6, 0.0);
  REQUIRE(ann.r(z) < 0.0);

  // the straight segment [0,1] z crosses the inner hole
  bool segment_exits = false;
  for (int k = 1; k < 400; ++k) {
    CVec p = z;
    for (auto& x : p) x *= (k / 400.0);
    if (ann.r(p) >= 0.0) segment_exits = true;
  }
  CHECK(segment_exits);

  const PathPlan plan = gleason::plan_path(ann, cov, z);
  CHECK(plan.nodes.size() >= 3);  // genuinely curved
  const auto v = gleason::validate_path(ann, cov, plan, 1200);
  CHECK(v.membership_ok);
  CHECK(v.clearance_ok);
  CHECK(v.loop_free);
}

TEST_CASE("validate_path passes on the ball and flags corruption") {
  const auto& ball = gt::ball();
  const auto& cov = gt::ball_cover();
  const CVec z = gt::pt(0.5, 0.2);
  PathPlan plan = gleason::plan_path(ball, cov, z);
  auto v = gleason::validate_path(ball, cov, plan);
  CHECK(v.endpoint_err0 < 1e-12);
  CHECK(v.endpoint_err1 < 1e-12);
  CHECK(v.membership_ok);
  CHECK(v.clearance_ok);
  CHECK(v.deriv_ok);
  CHECK(v.loop_free);
  CHECK(v.continuity_eta > 0.0);

  // deliberately corrupted plan: a node outside the domain
  PathPlan bad = plan;
  bad.nodes = {cplx(0.0), cplx(0.5, 3.0), cplx(1.0)};
  bad.finalize();
  v = gleason::validate_path(ball, cov, bad, 400);
  CHECK_FALSE(v.membership_ok);
}

TEST_CASE("plan continuity under small perturbations") {
  const auto& ball = gt::ball();
  const auto& cov = gt::ball_cover();
  const CVec z = gt::pt(0.55, -0.3);
  const PathPlan plan = gleason::plan_path(ball, cov, z);
  const auto v = gleason::validate_path(ball, cov, plan);
  REQUIRE(v.continuity_eta > 0.0);
  CHECK(v.continuity_deviation <= v.continuity_C * v.continuity_eta + 1e-15);
  CHECK(v.continuity_C < 50.0);  // empirical Lipschitz stays tame on the ball
}

TEST_CASE("deliberate detours stay valid and differ from the default plan") {
  const auto& ball = gt::ball();
  const auto& cov = gt::ball_cover();
  gleason::Rng rng(404);
  const CVec z = gt::pt(0.3, 0.52);
  const PathPlan base = gleason::plan_path(ball, cov, z);
  const PathPlan alt = gleason::plan_path_variant(ball, cov, z, rng);
  const auto v = gleason::validate_path(ball, cov, alt);
  CHECK(v.membership_ok);
  CHECK(v.clearance_ok);
  CHECK(v.loop_free);
  REQUIRE(alt.nodes.size() == 3);
  double dev = 0.0;
  for (int i = 0; i <= 100; ++i)
    dev = std::max(dev, std::abs(base.point(i / 100.0) - alt.point(i / 100.0)));
  CHECK(dev > 1e-3);  // genuinely different curves
}

TEST_CASE("plan_path rejects bad inputs") {
  const auto& ball = gt::ball();
  const auto& cov = gt::ball_cover();
  CHECK_THROWS_AS(gleason::plan_path(ball, cov, gt::pt(0.0, 0.0)), gleason::ZeroDirection);
  CHECK_THROWS_AS(gleason::plan_path(ball, cov, gt::pt(2.0, 0.0)), gleason::PointOutsideDomain);
}
