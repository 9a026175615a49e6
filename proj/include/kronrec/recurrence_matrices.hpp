#pragma once

// The banded matrices [A]_l (l x (l+d)) and {A}_m (m x m lower triangular)
// attached to a polynomial, recurrence extension, and the factorization
// identities [A]_l = [B]_l [C]_{l+s} and {A}_m = {B}_m {C}_m.
//
// Vectors are indexed ascending (v_1..v_m), so kernel vectors of [A]_l read
// directly as recurrence sequences.

#include "kronrec/matrix.hpp"
#include "kronrec/poly_core.hpp"

#include <span>
#include <vector>

namespace kronrec {

template <class T>
Matrix<T> band_matrix(std::span<const T> coeffs, std::size_t ell) {
  if (ell < 1) throw std::invalid_argument("band_matrix: row count must be >= 1");
  if (coeffs.empty() || coeffs.front() == T(0) || coeffs.back() == T(0))
    throw domain_error("band_matrix: a_0 and a_d must be nonzero");
  const std::size_t d = coeffs.size() - 1;
  Matrix<T> m(ell, ell + d, T(0));
  for (std::size_t i = 0; i < ell; ++i)
    for (std::size_t j = 0; j <= d; ++j) m(i, i + j) = coeffs[j];
  return m;
}

template <class T>
Matrix<T> tri_matrix(std::span<const T> coeffs, std::size_t m) {
  if (m < 1) throw std::invalid_argument("tri_matrix: size must be >= 1");
  const long d = static_cast<long>(coeffs.size()) - 1;
  Matrix<T> out(m, m, T(0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      long idx = d - static_cast<long>(i) + static_cast<long>(j);
      if (idx >= 0) out(i, j) = coeffs[static_cast<std::size_t>(idx)];
    }
  return out;
}

inline IntMatrix band_matrix(const IntPolynomial& a, std::size_t ell) {
  return band_matrix<Integer>(std::span<const Integer>(a.coeffs()), ell);
}

inline IntMatrix tri_matrix(const IntPolynomial& a, std::size_t m) {
  return tri_matrix<Integer>(std::span<const Integer>(a.coeffs()), m);
}

/// Extends d initial values by entry_{i+d} = -(sum_{j<d} a_j entry_{i+j}) / a_d.
template <class T>
std::vector<T> recurrence_extend(std::span<const T> coeffs, std::span<const T> init, std::size_t m) {
  const std::size_t d = coeffs.size() - 1;
  if (init.size() != d) throw std::invalid_argument("recurrence_extend: need exactly d initial values");
  if (m < d) throw std::invalid_argument("recurrence_extend: m must be >= d");
  if (coeffs.back() == T(0)) throw domain_error("recurrence_extend: a_d must be nonzero");
  std::vector<T> v(init.begin(), init.end());
  v.reserve(m);
  for (std::size_t i = 0; v.size() < m; ++i) {
    T acc(0);
    for (std::size_t j = 0; j < d; ++j) acc += coeffs[j] * v[i + j];
    v.push_back(-acc / coeffs.back());
  }
  return v;
}

inline std::vector<Rational> recurrence_extend(const IntPolynomial& a, std::span<const Rational> init,
                                               std::size_t m) {
  std::vector<Rational> coeffs(a.coeffs().begin(), a.coeffs().end());
  return recurrence_extend<Rational>(coeffs, init, m);
}

/// True iff sum_j a_j v_{i+j} = 0 for every window of v.
inline bool is_recurrence(const IntPolynomial& a, std::span<const Rational> v) {
  const std::size_t d = a.degree();
  for (std::size_t i = 0; i + d < v.size(); ++i) {
    Rational acc = 0;
    for (std::size_t j = 0; j <= d; ++j) acc += Rational(a[j]) * v[i + j];
    if (acc != 0) return false;
  }
  return true;
}

inline bool is_recurrence(const IntPolynomial& a, std::span<const Integer> v) {
  std::vector<Rational> q(v.begin(), v.end());
  return is_recurrence(a, std::span<const Rational>(q));
}

/// Checks both factorization identities for A = B * C exactly. Throws if B*C
/// differs from A or A has a_0 = 0.
inline bool verify_factorization(const IntPolynomial& a, std::span<const Rational> b,
                                 std::span<const Rational> c, std::size_t ell) {
  require_nonzero_constant(a);
  if (b.empty() || c.empty() || b.size() + c.size() - 2 != a.degree())
    throw std::invalid_argument("verify_factorization: deg B + deg C must equal deg A");
  std::vector<Rational> prod(b.size() + c.size() - 1, Rational(0));
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t j = 0; j < c.size(); ++j) prod[i + j] += b[i] * c[j];
  for (std::size_t i = 0; i <= a.degree(); ++i)
    if (prod[i] != Rational(a[i])) throw std::invalid_argument("verify_factorization: B*C != A");
  const std::size_t s = b.size() - 1, t = c.size() - 1;
  std::vector<Rational> ac(a.coeffs().begin(), a.coeffs().end());
  RatMatrix band_a = band_matrix<Rational>(ac, ell);
  bool ok = band_a == band_matrix<Rational>(b, ell) * band_matrix<Rational>(c, ell + s);
  ok = ok && band_a == band_matrix<Rational>(c, ell) * band_matrix<Rational>(b, ell + t);
  const std::size_t m = ell + a.degree();
  ok = ok && tri_matrix<Rational>(ac, m) == tri_matrix<Rational>(b, m) * tri_matrix<Rational>(c, m);
  return ok;
}

}  // namespace kronrec
