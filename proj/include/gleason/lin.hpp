#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "gleason/errors.hpp"

namespace gleason {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

// Hermitian inner product, conjugate-linear in the second slot:
// <a, b> = sum_j a_j * conj(b_j).
inline cplx inner(const CVec& a, const CVec& b) {
  if (a.size() != b.size()) throw DimensionMismatch("inner: size mismatch");
  cplx s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * std::conj(b[j]);
  return s;
}

// Bilinear product (no conjugation), the one the SY rows use.
inline cplx dot_bilinear(const CVec& a, const CVec& b) {
  if (a.size() != b.size()) throw DimensionMismatch("dot_bilinear: size mismatch");
  cplx s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * b[j];
  return s;
}

inline double norm2sq(const CVec& a) {
  double s = 0.0;
  for (const auto& x : a) s += std::norm(x);
  return s;
}

inline double norm2(const CVec& a) { return std::sqrt(norm2sq(a)); }

inline CVec operator+(CVec a, const CVec& b) {
  for (std::size_t j = 0; j < a.size(); ++j) a[j] += b[j];
  return a;
}

inline CVec operator-(CVec a, const CVec& b) {
  for (std::size_t j = 0; j < a.size(); ++j) a[j] -= b[j];
  return a;
}

inline CVec operator*(cplx c, CVec a) {
  for (auto& x : a) x *= c;
  return a;
}

inline CVec axpy(const CVec& a, cplx c, const CVec& b) {
  CVec r = a;
  for (std::size_t j = 0; j < r.size(); ++j) r[j] += c * b[j];
  return r;
}

inline double vec_dist(const CVec& a, const CVec& b) { return norm2(a - b); }

inline CVec normalized(const CVec& a, double floor = 1e-300) {
  const double n = norm2(a);
  if (n < floor) throw ZeroDirection("normalized: vector norm below floor");
  CVec r = a;
  for (auto& x : r) x /= n;
  return r;
}

// Orthogonal projection of v onto the complex line through 0 and z:
// pi_z(v) = (<v, z> / <z, z>) z.
inline CVec project_onto_line(const CVec& v, const CVec& z, double tol = 1e-12) {
  const double zn = norm2(z);
  if (zn < tol) throw ZeroDirection("project_onto_line: direction ~ 0");
  const cplx coef = inner(v, z) / inner(z, z);
  CVec r = z;
  for (auto& x : r) x *= coef;
  return r;
}

// The coefficient alone: pi_z(v) = line_coefficient(v, z) * z.
inline cplx line_coefficient(const CVec& v, const CVec& z, double tol = 1e-12) {
  const double zn = norm2(z);
  if (zn < tol) throw ZeroDirection("line_coefficient: direction ~ 0");
  return inner(v, z) / inner(z, z);
}

// --- small dense complex linear algebra (n is 2..4 in practice) ---

using CMat = std::vector<CVec>;  // row-major

inline cplx det(CMat m) {
  const std::size_t n = m.size();
  cplx d = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(m[i][k]) > std::abs(m[piv][k])) piv = i;
    if (std::abs(m[piv][k]) == 0.0) return 0.0;
    if (piv != k) {
      std::swap(m[piv], m[k]);
      d = -d;
    }
    d *= m[k][k];
    for (std::size_t i = k + 1; i < n; ++i) {
      const cplx f = m[i][k] / m[k][k];
      for (std::size_t j = k; j < n; ++j) m[i][j] -= f * m[k][j];
    }
  }
  return d;
}

// Cramer's rule. Returns x with M x = rhs and reports |det M| through det_abs.
inline CVec cramer_solve(const CMat& m, const CVec& rhs, double* det_abs = nullptr,
                         double singular_floor = 1e-8) {
  const std::size_t n = m.size();
  const cplx d = det(m);
  if (det_abs) *det_abs = std::abs(d);
  if (std::abs(d) < singular_floor)
    throw SingularSystem("cramer_solve: |det| = " + std::to_string(std::abs(d)));
  CVec x(n);
  for (std::size_t j = 0; j < n; ++j) {
    CMat mj = m;
    for (std::size_t i = 0; i < n; ++i) mj[i][j] = rhs[i];
    x[j] = det(mj) / d;
  }
  return x;
}

// Real Gaussian elimination with partial pivoting (Newton steps and the like).
inline std::vector<double> solve_real(std::vector<std::vector<double>> a,
                                      std::vector<double> b) {
  const std::size_t n = a.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::fabs(a[i][k]) > std::fabs(a[piv][k])) piv = i;
    if (std::fabs(a[piv][k]) < 1e-300) throw SingularSystem("solve_real: singular");
    std::swap(a[piv], a[k]);
    std::swap(b[piv], b[k]);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a[i][k] / a[k][k];
      for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
      b[i] -= f * b[k];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a[i][j] * x[j];
    x[i] = s / a[i][i];
  }
  return x;
}

// Complex vector <-> flat real coordinates (x1, y1, x2, y2, ...).
inline std::vector<double> to_real(const CVec& z) {
  std::vector<double> r(2 * z.size());
  for (std::size_t j = 0; j < z.size(); ++j) {
    r[2 * j] = z[j].real();
    r[2 * j + 1] = z[j].imag();
  }
  return r;
}

inline CVec to_complex(const std::vector<double>& r) {
  CVec z(r.size() / 2);
  for (std::size_t j = 0; j < z.size(); ++j) z[j] = {r[2 * j], r[2 * j + 1]};
  return z;
}

}  // namespace gleason
