#pragma once

// Exact integer/rational linear algebra: valuations, Bareiss determinants,
// Hermite and Smith normal forms, saturated integer kernels and exact solves.

#include "kronrec/matrix.hpp"
#include "kronrec/numeric.hpp"

#include <compare>
#include <cstdint>
#include <optional>
#include <ostream>
#include <tuple>
#include <utility>
#include <vector>

namespace kronrec {

/// p-adic valuation with +inf for zero.
class PAdicVal {
 public:
  PAdicVal() = default;  // +inf
  explicit PAdicVal(long v) : value_(v) {}
  static PAdicVal infinity() { return {}; }

  bool is_infinite() const { return !value_.has_value(); }
  long value() const {
    if (!value_) throw std::logic_error("valuation is +inf");
    return *value_;
  }

  friend PAdicVal operator+(PAdicVal a, PAdicVal b) {
    if (a.is_infinite() || b.is_infinite()) return {};
    return PAdicVal(*a.value_ + *b.value_);
  }
  friend bool operator==(const PAdicVal&, const PAdicVal&) = default;
  friend std::strong_ordering operator<=>(const PAdicVal& a, const PAdicVal& b) {
    if (a.is_infinite() || b.is_infinite())
      return a.is_infinite() == b.is_infinite() ? std::strong_ordering::equal
             : a.is_infinite()                  ? std::strong_ordering::greater
                                                : std::strong_ordering::less;
    return *a.value_ <=> *b.value_;
  }
  /// Valuation compared against a rational bound (used by slope checks).
  bool at_least(const Rational& bound) const { return is_infinite() || Rational(*value_) >= bound; }

  std::string str() const { return is_infinite() ? "inf" : std::to_string(*value_); }
  friend std::ostream& operator<<(std::ostream& os, const PAdicVal& v) { return os << v.str(); }

 private:
  std::optional<long> value_;
};

namespace detail {

inline long multiplicity(Integer x, const Integer& p) {
  long v = 0;
  x = abs(x);
  while (x % p == 0) {
    x /= p;
    ++v;
  }
  return v;
}

/// Floor division for possibly negative operands.
inline Integer floor_div(const Integer& a, const Integer& b) {
  Integer q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) q -= 1;
  return q;
}

/// Returns (g, x, y) with x*a + y*b = g = gcd(a, b) >= 0.
inline std::tuple<Integer, Integer, Integer> ext_gcd(const Integer& a, const Integer& b) {
  Integer old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    Integer q = old_r / r;
    Integer tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
    tmp = old_t - q * t;
    old_t = t;
    t = tmp;
  }
  if (old_r < 0) {
    old_r = -old_r;
    old_s = -old_s;
    old_t = -old_t;
  }
  return {old_r, old_s, old_t};
}

// Row operation (ra, rb) <- (x ra + y rb, u ra + v rb).
inline void combine_rows(IntMatrix& m, std::size_t a, std::size_t b, const Integer& x,
                         const Integer& y, const Integer& u, const Integer& v) {
  for (std::size_t j = 0; j < m.cols(); ++j) {
    Integer ea = m(a, j), eb = m(b, j);
    m(a, j) = x * ea + y * eb;
    m(b, j) = u * ea + v * eb;
  }
}

inline void add_row_multiple(IntMatrix& m, std::size_t dst, std::size_t src, const Integer& f) {
  if (f == 0) return;
  for (std::size_t j = 0; j < m.cols(); ++j) m(dst, j) += f * m(src, j);
}

inline void add_col_multiple(IntMatrix& m, std::size_t dst, std::size_t src, const Integer& f) {
  if (f == 0) return;
  for (std::size_t i = 0; i < m.rows(); ++i) m(i, dst) += f * m(i, src);
}

}  // namespace detail

inline void require_prime(const Integer& p) {
  if (!is_prime(p)) throw domain_error("p = " + p.str() + " is not prime");
}

inline PAdicVal p_adic_valuation(const Integer& x, const Integer& p) {
  require_prime(p);
  if (x == 0) return PAdicVal::infinity();
  return PAdicVal(detail::multiplicity(x, p));
}

inline PAdicVal p_adic_valuation(const Rational& x, const Integer& p) {
  require_prime(p);
  if (x == 0) return PAdicVal::infinity();
  return PAdicVal(detail::multiplicity(numerator(x), p) - detail::multiplicity(denominator(x), p));
}

/// Fraction-free (Bareiss) determinant over the integers.
inline Integer determinant(IntMatrix m) {
  const std::size_t n = m.rows();
  if (n != m.cols()) throw std::invalid_argument("determinant of non-square matrix");
  if (n == 0) return 1;
  int sign = 1;
  Integer prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t swap = k + 1;
      while (swap < n && m(swap, k) == 0) ++swap;
      if (swap == n) return 0;
      m.swap_rows(k, swap);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

/// Rational determinant: rows are scaled to integers, then Bareiss.
inline Rational determinant(const RatMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant of non-square matrix");
  IntMatrix scaled(m.rows(), m.cols());
  Integer scale = 1;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Integer row_lcm = 1;
    for (std::size_t j = 0; j < m.cols(); ++j) row_lcm = lcm(row_lcm, denominator(m(i, j)));
    for (std::size_t j = 0; j < m.cols(); ++j)
      scaled(i, j) = numerator(m(i, j)) * (row_lcm / denominator(m(i, j)));
    scale *= row_lcm;
  }
  return Rational(determinant(std::move(scaled))) / Rational(scale);
}

struct HermiteForm {
  IntMatrix H;  // row echelon, positive pivots, 0 <= entries above a pivot < pivot
  IntMatrix U;  // unimodular, U * A == H
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_cols;
};

/// Row-style Hermite normal form acting by left multiplication.
inline HermiteForm hnf(const IntMatrix& a) {
  HermiteForm out{a, IntMatrix::identity(a.rows()), 0, {}};
  IntMatrix& h = out.H;
  IntMatrix& u = out.U;
  std::size_t pr = 0;
  for (std::size_t col = 0; col < h.cols() && pr < h.rows(); ++col) {
    for (std::size_t i = pr + 1; i < h.rows(); ++i) {
      if (h(i, col) == 0) continue;
      const Integer pa = h(pr, col), pb = h(i, col);
      auto [g, x, y] = detail::ext_gcd(pa, pb);
      const Integer ua = -pb / g, ub = pa / g;
      detail::combine_rows(h, pr, i, x, y, ua, ub);
      detail::combine_rows(u, pr, i, x, y, ua, ub);
    }
    if (h(pr, col) == 0) continue;
    if (h(pr, col) < 0) {
      for (std::size_t j = 0; j < h.cols(); ++j) h(pr, j) = -h(pr, j);
      for (std::size_t j = 0; j < u.cols(); ++j) u(pr, j) = -u(pr, j);
    }
    for (std::size_t i = 0; i < pr; ++i) {
      Integer q = detail::floor_div(h(i, col), h(pr, col));
      detail::add_row_multiple(h, i, pr, -q);
      detail::add_row_multiple(u, i, pr, -q);
    }
    out.pivot_cols.push_back(col);
    ++pr;
  }
  out.rank = pr;
  return out;
}

/// Elementary divisors d_1 | d_2 | ... (length min(rows, cols), zeros last).
inline std::vector<Integer> snf(IntMatrix m) {
  const std::size_t n = std::min(m.rows(), m.cols());
  std::vector<Integer> divisors;
  std::size_t t = 0;
  auto move_min_to_pivot = [&](bool whole) {
    std::optional<std::pair<std::size_t, std::size_t>> best;
    for (std::size_t i = t; i < m.rows(); ++i)
      for (std::size_t j = t; j < m.cols(); ++j) {
        if (!whole && i != t && j != t) continue;
        if (m(i, j) == 0) continue;
        if (!best || abs(m(i, j)) < abs(m(best->first, best->second))) best = {{i, j}};
      }
    if (!best) return false;
    m.swap_rows(t, best->first);
    m.swap_cols(t, best->second);
    return true;
  };
  for (; t < n; ++t) {
    if (!move_min_to_pivot(true)) break;
    for (;;) {
      bool dirty = false;
      for (std::size_t i = t + 1; i < m.rows(); ++i) {
        if (m(i, t) == 0) continue;
        detail::add_row_multiple(m, i, t, -(m(i, t) / m(t, t)));
        dirty = dirty || m(i, t) != 0;
      }
      for (std::size_t j = t + 1; j < m.cols(); ++j) {
        if (m(t, j) == 0) continue;
        detail::add_col_multiple(m, j, t, -(m(t, j) / m(t, t)));
        dirty = dirty || m(t, j) != 0;
      }
      if (dirty) {
        move_min_to_pivot(false);
        continue;
      }
      bool fixed = false;
      for (std::size_t i = t + 1; i < m.rows() && !fixed; ++i)
        for (std::size_t j = t + 1; j < m.cols() && !fixed; ++j)
          if (m(i, j) % m(t, t) != 0) {
            detail::add_row_multiple(m, t, i, Integer(1));
            fixed = true;
          }
      if (!fixed) break;
    }
    divisors.push_back(abs(m(t, t)));
  }
  divisors.resize(n, Integer(0));
  return divisors;
}

/// Basis (as HNF rows) of the saturated lattice {v in Z^cols : A v = 0}.
inline IntMatrix integer_kernel(const IntMatrix& a) {
  HermiteForm h = hnf(a.transpose());
  IntMatrix basis(0, a.cols());
  for (std::size_t i = h.rank; i < h.U.rows(); ++i) basis.append_row(h.U.row(i));
  if (basis.rows() == 0) return basis;
  IntMatrix reduced = hnf(basis).H;
  return reduced;
}

/// Exact solution X of A X = B for square nonsingular A.
inline RatMatrix solve_exact(const RatMatrix& a, const RatMatrix& b) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("solve_exact: A must be square");
  if (b.rows() != n) throw std::invalid_argument("solve_exact: shape mismatch");
  RatMatrix lhs = a, rhs = b;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    while (piv < n && lhs(piv, k) == 0) ++piv;
    if (piv == n) throw domain_error("solve_exact: singular matrix");
    lhs.swap_rows(k, piv);
    rhs.swap_rows(k, piv);
    const Rational inv = 1 / lhs(k, k);
    for (std::size_t j = k; j < n; ++j) lhs(k, j) *= inv;
    for (std::size_t j = 0; j < rhs.cols(); ++j) rhs(k, j) *= inv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k || lhs(i, k) == 0) continue;
      const Rational f = lhs(i, k);
      for (std::size_t j = k; j < n; ++j) lhs(i, j) -= f * lhs(k, j);
      for (std::size_t j = 0; j < rhs.cols(); ++j) rhs(i, j) -= f * rhs(k, j);
    }
  }
  return rhs;
}

inline RatMatrix inverse(const RatMatrix& a) { return solve_exact(a, RatMatrix::identity(a.rows())); }

inline RatMatrix to_rational(const IntMatrix& m) { return m.cast<Rational>(); }

}  // namespace kronrec
