#include <catch2/catch_amalgamated.hpp>

#include "gleason/polynomial.hpp"
#include "helpers.hpp"

using gleason::cplx;
using gleason::CVec;
using gleason::MultiIndex;
using gleason::Polynomial;

namespace {
Polynomial mono(std::vector<int> a, cplx c = 1.0) { return Polynomial::monomial(std::move(a), c); }
}  // namespace

TEST_CASE("eval matches hand values") {
  const Polynomial p = mono({2, 0});  // z1^2
  CHECK(gt::approx(p.eval(gt::pt(3.0, 0.0)), 9.0));
  const Polynomial q = mono({1, 1});  // z1 z2
  CHECK(gt::approx(q.eval({cplx(2, 1), cplx(0, 1)}), cplx(2, 1) * cplx(0, 1)));
  CHECK(gt::approx(Polynomial::zero(2).eval(gt::pt(1, 1)), 0.0));
}

TEST_CASE("eval handles mixed sparse terms") {
  // 2 z1^3 z2 - (1+i) z2^2 + 4
  Polynomial p = mono({3, 1}, 2.0) + mono({0, 2}, cplx(-1, -1)) + mono({0, 0}, 4.0);
  const CVec z = {cplx(0.5, -0.25), cplx(1.25, 0.75)};
  cplx expect = 2.0 * std::pow(z[0], 3) * z[1] + cplx(-1, -1) * z[1] * z[1] + 4.0;
  CHECK(gt::approx(p.eval(z), expect, 1e-13));
}

TEST_CASE("partial derivatives") {
  CHECK(mono({1, 1}).partial(0) == mono({0, 1}));              // d/dz1 (z1 z2) = z2
  CHECK(mono({2, 3}).partial(1) == mono({2, 2}, 3.0));         // d/dz2 (z1^2 z2^3) = 3 z1^2 z2^2
  CHECK(mono({0, 2}).partial(0).is_zero());
  CHECK_THROWS_AS(mono({1, 0}).partial(2), gleason::DimensionMismatch);
}

TEST_CASE("leibenzon closed form on monomials") {
  // T1(z1^2) = z1, T2(z1^2) = 0
  CHECK(mono({2, 0}).leibenzon(0) == mono({1, 0}));
  CHECK(mono({2, 0}).leibenzon(1).is_zero());
  // T(z1 z2) = (z2/2, z1/2)
  CHECK(mono({1, 1}).leibenzon(0) == mono({0, 1}, 0.5));
  CHECK(mono({1, 1}).leibenzon(1) == mono({1, 0}, 0.5));
  CHECK_THROWS_AS(mono({0, 0}, 1.0).leibenzon(0), gleason::NonVanishing);
}

TEST_CASE("monomial rule, exhaustive small cases") {
  // T_i(z^a) = a_i z^(a - e_i) / |a| for every |a| <= 10
  for (int n : {2, 3}) {
    for (const auto& alpha : gleason::monomials_vanishing(n, 10)) {
      const Polynomial p = Polynomial::monomial(alpha, 1.0);
      for (int i = 0; i < n; ++i) {
        const Polynomial t = p.leibenzon(i);
        if (alpha[i] == 0) {
          CHECK(t.is_zero());
        } else {
          MultiIndex b = alpha;
          b[i] -= 1;
          const double want = static_cast<double>(alpha[i]) / gleason::order_of(alpha);
          REQUIRE(t.term_count() == 1);
          CHECK(gt::approx(t.coefficient(b), want, 1e-15));
        }
      }
    }
  }
}

TEST_CASE("division identity is exact to roundoff") {
  gleason::Rng rng(20260810);
  for (int n : {2, 3}) {
    for (int rep = 0; rep < 40; ++rep) {
      const int d = 1 + static_cast<int>(rng.uniform() * 20);
      const Polynomial p = gt::random_poly(n, d, rng);
      Polynomial sum = Polynomial::zero(n);
      for (int i = 0; i < n; ++i) sum = sum + p.leibenzon(i).mul_coordinate_minus(i, 0.0);
      const Polynomial rem = sum - p;
      CHECK(rem.coeff_linf() <= 1e-12 * std::max(1.0, p.coeff_linf()));
    }
  }
}

TEST_CASE("euler cross-check: sum z_i D_i z^a = |a| z^a") {
  gleason::Rng rng(7);
  for (const auto& alpha : gleason::monomials_vanishing(2, 8)) {
    const Polynomial p = Polynomial::monomial(alpha, cplx(0.7, -0.2));
    Polynomial sum = Polynomial::zero(2);
    for (int i = 0; i < 2; ++i) sum = sum + p.partial(i).mul_coordinate_minus(i, 0.0);
    const Polynomial want = p.scaled(static_cast<double>(gleason::order_of(alpha)));
    CHECK((sum - want).coeff_linf() <= 1e-13);
  }
  (void)rng;
}

TEST_CASE("leibenzon linearity, coefficientwise") {
  gleason::Rng rng(99);
  for (int rep = 0; rep < 20; ++rep) {
    const Polynomial p = gt::random_poly(2, 12, rng);
    const Polynomial q = gt::random_poly(2, 12, rng);
    const cplx a = rng.unit_disc(), b = rng.unit_disc();
    for (int i = 0; i < 2; ++i) {
      const Polynomial lhs = (p.scaled(a) + q.scaled(b)).leibenzon(i);
      const Polynomial rhs = p.leibenzon(i).scaled(a) + q.leibenzon(i).scaled(b);
      CHECK((lhs - rhs).coeff_linf() <= 1e-14);
    }
  }
}

TEST_CASE("translate is an exact Taylor shift") {
  // (z1 + 1)(z2 - i) expanded
  const Polynomial p = mono({1, 1});
  const Polynomial t = p.translate({cplx(1.0), cplx(0.0, -1.0)});
  CHECK(gt::approx(t.coefficient({1, 1}), 1.0));
  CHECK(gt::approx(t.coefficient({1, 0}), cplx(0.0, -1.0)));
  CHECK(gt::approx(t.coefficient({0, 1}), 1.0));
  CHECK(gt::approx(t.coefficient({0, 0}), cplx(0.0, -1.0)));

  gleason::Rng rng(5);
  for (int rep = 0; rep < 10; ++rep) {
    const Polynomial q = gt::random_poly(2, 9, rng, false);
    const CVec shift = {rng.unit_disc(), rng.unit_disc()};
    const Polynomial qs = q.translate(shift);
    const CVec z = {rng.unit_disc(), rng.unit_disc()};
    CHECK(gt::approx(qs.eval(z), q.eval(z + shift), 1e-11));
  }
}

TEST_CASE("canonical form drops zero coefficients") {
  Polynomial p(2, {{{1, 0}, 1.0}, {{1, 0}, -1.0}, {{0, 1}, 2.0}});
  CHECK(p.term_count() == 1);
  CHECK(p.degree() == 1);
  CHECK(p.vanishes_at_origin());
}
