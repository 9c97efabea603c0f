#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "gleason/errors.hpp"
#include "gleason/lin.hpp"

namespace gleason {

using MultiIndex = std::vector<int>;

inline int order_of(const MultiIndex& a) {
  int s = 0;
  for (int k : a) s += k;
  return s;
}

// exact for k <= 30 or so; desk-scale degrees stay well inside that
inline double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return std::round(r);
}

// Multivariate complex polynomial, canonical sparse form: terms sorted
// lexicographically by multi-index, no zero coefficients stored.
class Polynomial {
public:
  struct Term {
    MultiIndex alpha;
    cplx c;
  };

  Polynomial() = default;
  explicit Polynomial(int n) : n_(n) {}

  Polynomial(int n, std::vector<Term> terms) : n_(n) {
    for (auto& t : terms) {
      if (static_cast<int>(t.alpha.size()) != n) throw DimensionMismatch("Polynomial: bad multi-index length");
      for (int k : t.alpha)
        if (k < 0) throw DimensionMismatch("Polynomial: negative exponent");
    }
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return a.alpha < b.alpha; });
    for (auto& t : terms) {
      if (!terms_.empty() && terms_.back().alpha == t.alpha)
        terms_.back().c += t.c;
      else
        terms_.push_back(t);
    }
    prune();
  }

  static Polynomial zero(int n) { return Polynomial(n); }

  static Polynomial monomial(MultiIndex alpha, cplx c) {
    const int n = static_cast<int>(alpha.size());
    return Polynomial(n, {Term{std::move(alpha), c}});
  }

  static Polynomial constant(int n, cplx c) { return monomial(MultiIndex(n, 0), c); }

  static Polynomial coordinate(int n, int i) {
    MultiIndex a(n, 0);
    a.at(i) = 1;
    return monomial(a, 1.0);
  }

  int dimension() const { return n_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  int degree() const {
    int d = 0;
    for (const auto& t : terms_) d = std::max(d, order_of(t.alpha));
    return d;
  }

  cplx coefficient(const MultiIndex& alpha) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), alpha,
                               [](const Term& t, const MultiIndex& a) { return t.alpha < a; });
    if (it != terms_.end() && it->alpha == alpha) return it->c;
    return 0.0;
  }

  bool vanishes_at_origin() const { return coefficient(MultiIndex(n_, 0)) == cplx(0.0); }

  double coeff_linf() const {
    double m = 0.0;
    for (const auto& t : terms_) m = std::max(m, std::abs(t.c));
    return m;
  }

  cplx eval(const CVec& z) const {
    if (static_cast<int>(z.size()) != n_) throw DimensionMismatch("eval: point dimension");
    if (terms_.empty()) return 0.0;
    return eval_span(terms_.data(), terms_.data() + terms_.size(), 0, z);
  }

  // d/dz_i, multi-index rule alpha -> alpha - e_i with factor alpha_i
  Polynomial partial(int i) const {
    check_coord(i);
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) {
      if (t.alpha[i] == 0) continue;
      Term s = t;
      s.c *= static_cast<double>(s.alpha[i]);
      s.alpha[i] -= 1;
      out.push_back(std::move(s));
    }
    return Polynomial(n_, std::move(out));
  }

  // T_i(P)(z) = int_0^1 D_i P(lambda z) dlambda, termwise:
  // c_a z^a -> c_a * a_i / |a| * z^(a - e_i). Requires P(0) = 0.
  Polynomial leibenzon(int i) const {
    check_coord(i);
    if (!vanishes_at_origin()) throw NonVanishing("leibenzon: P(0) != 0");
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) {
      if (t.alpha[i] == 0) continue;
      Term s = t;
      s.c *= static_cast<double>(s.alpha[i]) / static_cast<double>(order_of(s.alpha));
      s.alpha[i] -= 1;
      out.push_back(std::move(s));
    }
    return Polynomial(n_, std::move(out));
  }

  Polynomial scaled(cplx c) const {
    std::vector<Term> out = terms_;
    for (auto& t : out) t.c *= c;
    return Polynomial(n_, std::move(out));
  }

  Polynomial operator+(const Polynomial& o) const {
    check_dim(o);
    std::vector<Term> out = terms_;
    out.insert(out.end(), o.terms_.begin(), o.terms_.end());
    return Polynomial(n_, std::move(out));
  }

  Polynomial operator-(const Polynomial& o) const { return *this + o.scaled(-1.0); }

  // (z_i - c) * P
  Polynomial mul_coordinate_minus(int i, cplx c) const {
    check_coord(i);
    std::vector<Term> out;
    out.reserve(2 * terms_.size());
    for (const auto& t : terms_) {
      Term up = t;
      up.alpha[i] += 1;
      out.push_back(std::move(up));
      if (c != cplx(0.0)) out.push_back(Term{t.alpha, -c * t.c});
    }
    return Polynomial(n_, std::move(out));
  }

  // P(z + p), exact Taylor shift variable by variable
  Polynomial translate(const CVec& p) const {
    if (static_cast<int>(p.size()) != n_) throw DimensionMismatch("translate: shift dimension");
    Polynomial cur = *this;
    for (int v = 0; v < n_; ++v) {
      if (p[v] == cplx(0.0)) continue;
      cur = cur.shift_one_var(v, p[v]);
    }
    return cur;
  }

  bool operator==(const Polynomial& o) const { return n_ == o.n_ && same_terms(o); }

private:
  int n_ = 0;
  std::vector<Term> terms_;

  void check_dim(const Polynomial& o) const {
    if (o.n_ != n_) throw DimensionMismatch("polynomial dimension mismatch");
  }
  void check_coord(int i) const {
    if (i < 0 || i >= n_) throw DimensionMismatch("coordinate index out of range");
  }

  void prune() {
    terms_.erase(std::remove_if(terms_.begin(), terms_.end(),
                                [](const Term& t) { return t.c == cplx(0.0); }),
                 terms_.end());
  }

  bool same_terms(const Polynomial& o) const {
    if (terms_.size() != o.terms_.size()) return false;
    for (std::size_t k = 0; k < terms_.size(); ++k)
      if (terms_[k].alpha != o.terms_[k].alpha || terms_[k].c != o.terms_[k].c) return false;
    return true;
  }

  static cplx eval_span(const Term* lo, const Term* hi, int v, const CVec& z) {
    const int n = static_cast<int>(z.size());
    if (v == n) return lo->c;
    cplx acc = 0.0;
    cplx xpow = 1.0;
    int cur = 0;
    const Term* it = lo;
    while (it != hi) {
      const int e = it->alpha[v];
      const Term* jt = it;
      while (jt != hi && jt->alpha[v] == e) ++jt;
      for (; cur < e; ++cur) xpow *= z[v];
      acc += xpow * eval_span(it, jt, v + 1, z);
      it = jt;
    }
    return acc;
  }

  Polynomial shift_one_var(int v, cplx s) const {
    // bucket by the multi-index with coordinate v zeroed, then 1-D shift
    std::map<MultiIndex, std::vector<cplx>> buckets;
    for (const auto& t : terms_) {
      MultiIndex key = t.alpha;
      const int e = key[v];
      key[v] = 0;
      auto& uni = buckets[key];
      if (static_cast<int>(uni.size()) <= e) uni.resize(e + 1, 0.0);
      uni[e] += t.c;
    }
    std::vector<Term> out;
    for (auto& [key, uni] : buckets) {
      const int top = static_cast<int>(uni.size()) - 1;
      for (int j = 0; j <= top; ++j) {
        cplx b = 0.0;
        cplx spow = 1.0;
        for (int k = j; k <= top; ++k) {
          b += binom(k, j) * uni[k] * spow;
          spow *= s;
        }
        if (b != cplx(0.0)) {
          MultiIndex a = key;
          a[v] = j;
          out.push_back(Term{std::move(a), b});
        }
      }
    }
    return Polynomial(n_, std::move(out));
  }
};

// number of monomials of degree <= d in n variables
inline std::size_t monomial_count(int n, int d) {
  return static_cast<std::size_t>(binom(n + d, d));
}

// all multi-indices with 1 <= |alpha| <= d, deterministic order
inline std::vector<MultiIndex> monomials_vanishing(int n, int d) {
  std::vector<MultiIndex> out;
  MultiIndex a(n, 0);
  // counting in a mixed-radix style bounded by total degree
  while (true) {
    if (order_of(a) >= 1 && order_of(a) <= d) out.push_back(a);
    int v = n - 1;
    while (v >= 0) {
      a[v] += 1;
      if (order_of(a) <= d) break;
      a[v] = 0;
      --v;
    }
    if (v < 0) break;
  }
  std::sort(out.begin(), out.end(), [](const MultiIndex& x, const MultiIndex& y) {
    const int ox = order_of(x), oy = order_of(y);
    if (ox != oy) return ox < oy;
    return x < y;
  });
  return out;
}

}  // namespace gleason
