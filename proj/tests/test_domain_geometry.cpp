#include <catch2/catch_amalgamated.hpp>

#include "gleason/collar.hpp"
#include "gleason/domain.hpp"
#include "gleason/geometry.hpp"
#include "helpers.hpp"

using gleason::cplx;
using gleason::CVec;
using gleason::Domain;

TEST_CASE("inner normal on the unit ball is radial") {
  const Domain ball = gleason::make_ball();
  CHECK(gt::approx_vec(gleason::inner_normal(ball, gt::pt(1.0, 0.0)), gt::pt(-1.0, 0.0), 1e-12));
  CHECK(gt::approx_vec(gleason::inner_normal(ball, {cplx(0), cplx(0, 1)}),
                       {cplx(0), cplx(0, -1)}, 1e-12));
  // inward orientation: a small step along n decreases r
  const CVec w = gt::pt(1.0, 0.0);
  const CVec n = gleason::inner_normal(ball, w);
  CHECK(ball.r(gleason::axpy(w, 0.01, n)) < 0.0);
}

TEST_CASE("inner normal on the ellipsoid") {
  const Domain el = gleason::make_ellipsoid({1.0, 0.5});
  CHECK(gt::approx_vec(gleason::inner_normal(el, gt::pt(0.0, 0.5)), gt::pt(0.0, -1.0), 1e-12));
}

TEST_CASE("inner normal error paths") {
  const Domain ball = gleason::make_ball();
  CHECK_THROWS_AS(gleason::inner_normal(ball, gt::pt(0.5, 0.0)), gleason::NotOnBoundary);

  // cubed defining function: gradient vanishes on the whole boundary
  Domain flat = ball;
  flat.r = [](const CVec& z) {
    const double v = std::norm(z[0]) + std::norm(z[1]) - 1.0;
    return v * v * v;
  };
  flat.grad = {};
  flat.finalize();
  CHECK_THROWS_AS(gleason::inner_normal(flat, gt::pt(1.0, 0.0)), gleason::GradientVanishes);
}

TEST_CASE("tangent frame annihilates the dbar vector") {
  const Domain ball = gleason::make_ball();
  auto fr = gleason::tangent_frame(ball, gt::pt(1.0, 0.0));
  REQUIRE(fr.tangents.size() == 1);
  CHECK(gt::approx_vec(fr.tangents[0], gt::pt(0.0, 1.0), 1e-12));

  fr = gleason::tangent_frame(ball, gt::pt(0.0, 1.0));
  CHECK(gt::approx_vec(fr.tangents[0], gt::pt(1.0, 0.0), 1e-12));

  const Domain el = gleason::make_ellipsoid({1.0, 0.5});
  fr = gleason::tangent_frame(el, gt::pt(0.0, 0.5));
  CHECK(gt::approx_vec(fr.tangents[0], gt::pt(1.0, 0.0), 1e-12));

  // generic boundary points: |<dbar r, e>| ~ 0, frame orthonormal
  gleason::Rng rng(11);
  const auto samples = gleason::boundary_sample(ball, 50, rng);
  for (const auto& w : samples) {
    const auto f = gleason::tangent_frame(ball, w);
    const CVec db = ball.wirtinger(w);
    for (const auto& e : f.tangents) {
      CHECK(std::abs(gleason::dot_bilinear(db, e)) < 1e-10);
      CHECK(std::fabs(gleason::norm2(e) - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("tangent frame in C^3 is orthonormal") {
  const Domain b3 = gleason::make_ball(1.0, CVec(3, 0.0), "ball3");
  gleason::Rng rng(12);
  const auto samples = gleason::boundary_sample(b3, 25, rng);
  for (const auto& w : samples) {
    const auto f = gleason::tangent_frame(b3, w);
    REQUIRE(f.tangents.size() == 2);
    const CVec db = b3.wirtinger(w);
    for (std::size_t a = 0; a < 2; ++a) {
      CHECK(std::abs(gleason::dot_bilinear(db, f.tangents[a])) < 1e-10);
      for (std::size_t b = a + 1; b < 2; ++b)
        CHECK(std::abs(gleason::inner(f.tangents[a], f.tangents[b])) < 1e-12);
    }
  }
}

TEST_CASE("projection onto a complex line") {
  using gleason::project_onto_line;
  CHECK(gt::approx_vec(project_onto_line(gt::pt(1, 0), gt::pt(1, 0)), gt::pt(1, 0)));
  CHECK(gt::approx_vec(project_onto_line(gt::pt(0, 1), gt::pt(1, 0)), gt::pt(0, 0)));
  // v = (1,1), z = (1,i): pi = ((1-i)/2, (1+i)/2)
  const CVec v = gt::pt(1.0, 1.0);
  const CVec z = {cplx(1), cplx(0, 1)};
  CHECK(gt::approx_vec(project_onto_line(v, z), {cplx(0.5, -0.5), cplx(0.5, 0.5)}));
  CHECK_THROWS_AS(project_onto_line(v, gt::pt(0, 0)), gleason::ZeroDirection);
}

TEST_CASE("projection properties: idempotent, orthogonal remainder") {
  gleason::Rng rng(3);
  for (int rep = 0; rep < 50; ++rep) {
    CVec v = {rng.unit_disc(), rng.unit_disc(), rng.unit_disc()};
    CVec z = {rng.unit_disc(), rng.unit_disc(), rng.unit_disc()};
    if (gleason::norm2(z) < 0.1) continue;
    const CVec p = gleason::project_onto_line(v, z);
    CHECK(gt::approx_vec(gleason::project_onto_line(p, z), p, 1e-12));
    const CVec rem = v - p;
    CHECK(std::abs(gleason::inner(rem, z)) < 1e-12);
    CHECK(gt::approx_vec(p + rem, v, 1e-15));  // reconstruction to roundoff
  }
}

TEST_CASE("boundary sampling and distance") {
  const Domain ball = gleason::make_ball();
  gleason::Rng rng(42);
  const auto samples = gleason::boundary_sample(ball, 100, rng);
  REQUIRE(samples.size() >= 100);
  for (const auto& w : samples) CHECK(std::fabs(gleason::norm2(w) - 1.0) < 1e-9);

  CHECK(std::fabs(gleason::distance_to_boundary(ball, gt::pt(0.5, 0.0)) - 0.5) < 1e-6);
  const CVec foot = gleason::closest_boundary_point(ball, gt::pt(0.5, 0.0));
  CHECK(gt::approx_vec(foot, gt::pt(1.0, 0.0), 1e-6));

  // annulus product: nearest sheet is the inner circle
  const Domain ann = gleason::make_annulus_product();
  const CVec p = gt::pt(1.45, 0.0);  // 0.7 from center (.75,0): 0.2 to inner, 0.3 to outer
  CHECK(std::fabs(gleason::distance_to_boundary(ann, p) - 0.2) < 1e-6);
}

TEST_CASE("catalog domains satisfy the basic invariants") {
  for (const Domain& d : {gleason::make_ball(), gleason::make_ellipsoid({1.0, 0.5}),
                          gleason::make_grange(), gleason::make_annulus_product()}) {
    CAPTURE(d.name);
    CHECK(gleason::validate_domain(d).empty());
    CHECK(d.r(d.seed) < 0.0);
    CHECK(d.r(CVec(d.n, 0.0)) < 0.0);  // the origin is the Gleason point
  }
}

TEST_CASE("grange profile function") {
  CHECK(gleason::grange_h(0.0) == 0.0);
  CHECK(gleason::grange_h(0.5) == Catch::Approx(0.5 / std::log(2.0)));
  // h' -> 0 at 0+ (the boundary is C^1 there), but only at a 1/|log| rate
  CHECK(std::fabs(gleason::grange_h_prime(1e-300)) < 0.01);
  CHECK(gleason::grange_h_prime(1e-12) > gleason::grange_h_prime(1e-300));
  CHECK(gleason::grange_h_prime(1e-3) > gleason::grange_h_prime(1e-12));
  // no power of x bounds h'(x): h'(x)/x^eps diverges as x -> 0
  CHECK(gleason::grange_h_prime(1e-20) / std::pow(1e-20, 0.25) > 100.0);
}
