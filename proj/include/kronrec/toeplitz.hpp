#pragma once

// Banded Toeplitz determinants: the direct exact oracle, Trench's root
// formula D_{n-1} = (-1)^{ns} c_s^n G_n / G_0, Gram determinants of the rows
// of [B]_l and their link to the symbol B(x)B(1/x), Lyons-type ratios and
// growth of D_l / D_{l-1}.

#include "kronrec/exact_linalg.hpp"
#include "kronrec/poly_core.hpp"
#include "kronrec/recurrence_matrices.hpp"

#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace kronrec {

/// C(x) = sum_{j=-r}^{s} c_j x^j with rational coefficients.
class LaurentSymbol {
 public:
  LaurentSymbol(std::vector<Rational> coeffs, std::size_t r) : coeffs_(std::move(coeffs)), r_(r) {
    if (coeffs_.size() < r_ + 1) throw std::invalid_argument("LaurentSymbol: need c_{-r}..c_0");
    if (coeffs_.front() == 0 || coeffs_.back() == 0)
      throw domain_error("LaurentSymbol: c_{-r} and c_s must be nonzero");
  }

  std::size_t r() const { return r_; }
  std::size_t s() const { return coeffs_.size() - 1 - r_; }
  /// c_j, zero outside -r..s.
  Rational operator[](long j) const {
    long idx = j + static_cast<long>(r_);
    if (idx < 0 || idx >= static_cast<long>(coeffs_.size())) return 0;
    return coeffs_[static_cast<std::size_t>(idx)];
  }
  /// Ascending coefficients of x^r C(x).
  const std::vector<Rational>& shifted() const { return coeffs_; }
  bool is_hermitian() const {
    if (r() != s()) return false;
    for (long j = 1; j <= static_cast<long>(s()); ++j)
      if ((*this)[j] != (*this)[-j]) return false;
    return true;
  }
  std::string str() const {
    std::string out;
    for (long j = -static_cast<long>(r_); j <= static_cast<long>(s()); ++j) {
      if (!out.empty()) out += ",";
      out += to_string((*this)[j]);
    }
    return out;
  }

 private:
  std::vector<Rational> coeffs_;
  std::size_t r_;
};

/// The symbol B(x) B(1/x): c_j = sum_k b_k b_{k+j}, r = s = deg B.
inline LaurentSymbol symbol_of(std::span<const Rational> b) {
  if (b.empty() || b.front() == 0 || b.back() == 0)
    throw domain_error("symbol_of: b_0 and b_d must be nonzero");
  const long d = static_cast<long>(b.size()) - 1;
  std::vector<Rational> c;
  for (long j = -d; j <= d; ++j) {
    Rational acc = 0;
    for (long k = 0; k <= d; ++k)
      if (k + j >= 0 && k + j <= d) acc += b[static_cast<std::size_t>(k)] * b[static_cast<std::size_t>(k + j)];
    c.push_back(acc);
  }
  return LaurentSymbol(std::move(c), static_cast<std::size_t>(d));
}

inline LaurentSymbol symbol_of(const IntPolynomial& b) {
  std::vector<Rational> q(b.coeffs().begin(), b.coeffs().end());
  return symbol_of(q);
}

/// (n+1) x (n+1) matrix with entry (j, k) = c_{k-j}.
inline RatMatrix toeplitz_matrix(const LaurentSymbol& c, std::size_t n) {
  RatMatrix t(n + 1, n + 1);
  for (std::size_t j = 0; j <= n; ++j)
    for (std::size_t k = 0; k <= n; ++k) t(j, k) = c[static_cast<long>(k) - static_cast<long>(j)];
  return t;
}

/// D_n, exactly.
inline Rational toeplitz_det_direct(const LaurentSymbol& c, std::size_t n) {
  return determinant(toeplitz_matrix(c, n));
}

// ---------------------------------------------------------------------------
// Trench

struct SymbolRoot {
  ComplexReal value;
  int multiplicity = 1;
  std::optional<Rational> exact;
};

struct TrenchData {
  std::size_t n = 0;                // the formula returns D_{n-1}
  std::size_t matrix_size = 0;      // n, the order of the Toeplitz matrix
  std::vector<SymbolRoot> roots;    // roots of x^r C(x)
  std::complex<double> g0;          // G_0 (rescaled rows, see below)
  std::complex<double> gn;          // G_n (rescaled rows)
  double value = 0;                 // D_{n-1}
  double error = 0;                 // bound on |value - D_{n-1}| from the precision sweep
  std::optional<Rational> exact;    // set when every root is rational
  unsigned digits = 0;
};

namespace detail {

inline Integer to_integer_scaled(const std::vector<Rational>& c, std::vector<Integer>& out) {
  Integer den = 1;
  for (const auto& q : c) den = lcm(den, denominator(q));
  out.clear();
  for (const auto& q : c) out.push_back(numerator(q) * (den / denominator(q)));
  return den;
}

/// e(e-1)...(e-k+1)
template <class T>
T falling(long e, int k) {
  T out(1);
  for (int i = 0; i < k; ++i) out *= T(e - i);
  return out;
}

/// Exponents of g_n: 0..r-1, n+r..n+r+s-1.
inline std::vector<long> trench_exponents(std::size_t r, std::size_t s, std::size_t n) {
  std::vector<long> e;
  for (std::size_t i = 0; i < r; ++i) e.push_back(static_cast<long>(i));
  for (std::size_t i = 0; i < s; ++i) e.push_back(static_cast<long>(n + r + i));
  return e;
}

template <class T>
T pow_int(const T& base, long e) {
  T out(1), b = base;
  while (e > 0) {
    if (e & 1) out *= b;
    b *= b;
    e >>= 1;
  }
  return out;
}

/// Gaussian elimination with partial pivoting over Complex<Real>.
inline ComplexReal complex_det(std::vector<std::vector<ComplexReal>> a) {
  const std::size_t n = a.size();
  ComplexReal det(Real(1));
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (norm(a[r][c]) > norm(a[piv][c])) piv = r;
    if (norm(a[piv][c]) == 0) return ComplexReal(Real(0));
    if (piv != c) {
      std::swap(a[piv], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      ComplexReal f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return det;
}

/// Roots of x^r C(x) with multiplicities; exact values attached when the
/// root is rational.
inline std::vector<SymbolRoot> symbol_roots(const LaurentSymbol& c, const Real& target, const RootOptions& options) {
  std::vector<Integer> ints;
  to_integer_scaled(c.shifted(), ints);
  IntPolynomial poly(ints);
  std::vector<SymbolRoot> out;
  std::vector<RatPoly> factors;
  for (const auto& [factor, mult] : square_free_decomposition(poly)) {
    const Integer lead = abs(factor.leading());
    for (auto& r : roots_mp(factor, target, options)) {
      SymbolRoot sr{r.value, mult, std::nullopt};
      if (r.value.im == 0 && lead <= 1000000) {
        for (Integer q = 1; q <= lead && !sr.exact; ++q) {
          if (lead % q != 0) continue;
          Real scaled = r.value.re * Real(q);
          Integer p(boost::multiprecision::round(scaled).convert_to<Integer>());
          Rational cand(p, q);
          Rational acc = 0;
          for (std::size_t i = factor.degree() + 1; i-- > 0;) acc = acc * cand + Rational(factor[i]);
          if (acc == 0) sr.exact = cand;
        }
      }
      out.push_back(std::move(sr));
    }
  }
  return out;
}

template <class T, class Value>
std::vector<std::vector<T>> gamma_rows(const std::vector<SymbolRoot>& roots, const std::vector<long>& exps,
                                       Value&& value) {
  std::vector<std::vector<T>> rows;
  for (const auto& root : roots) {
    const T z = value(root);
    for (int k = 0; k < root.multiplicity; ++k) {
      std::vector<T> row;
      for (long e : exps) row.push_back(e < k ? T(0) : T(falling<T>(e, k) * pow_int(z, e - k)));
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

inline Rational exact_gamma_det(const std::vector<SymbolRoot>& roots, const std::vector<long>& exps) {
  auto rows = gamma_rows<Rational>(roots, exps, [](const SymbolRoot& r) { return *r.exact; });
  RatMatrix m(rows.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
  return determinant(m);
}

/// G_n with each root block divided by max{1, |xi|}^{n+r}; returns the
/// rescaled determinant and the log of the removed factor.
inline std::pair<ComplexReal, Real> scaled_gamma_det(const std::vector<SymbolRoot>& roots,
                                                     const std::vector<long>& exps, long top) {
  std::vector<std::vector<ComplexReal>> rows;
  Real log_scale = 0;
  for (const auto& root : roots) {
    Real mod = abs(root.value);
    Real scale = mod > 1 ? mod : Real(1);
    Real inv = pow(scale, -Real(top));
    for (int k = 0; k < root.multiplicity; ++k) {
      std::vector<ComplexReal> row;
      for (long e : exps) {
        if (e < k) {
          row.emplace_back(Real(0));
          continue;
        }
        ComplexReal v = pow_int(root.value, e - k) * ComplexReal(falling<Real>(e, k) * inv);
        row.push_back(v);
      }
      rows.push_back(std::move(row));
      log_scale += Real(top) * log(scale);
    }
  }
  return {complex_det(std::move(rows)), log_scale};
}

inline ComplexReal trench_value_mp(const LaurentSymbol& c, std::size_t n, const std::vector<SymbolRoot>& roots,
                                   ComplexReal* g0_out, ComplexReal* gn_out) {
  const std::size_t r = c.r(), s = c.s();
  auto [g0, l0] = scaled_gamma_det(roots, trench_exponents(r, s, 0), static_cast<long>(r));
  auto [gn, ln] = scaled_gamma_det(roots, trench_exponents(r, s, n), static_cast<long>(n + r));
  if (g0_out) *g0_out = g0;
  if (gn_out) *gn_out = gn;
  Real cs(c[static_cast<long>(s)].convert_to<Real>());
  Real factor = exp(ln - l0) * pow(cs, Real(n));
  if ((n * s) % 2 == 1) factor = -factor;
  return gn / g0 * ComplexReal(factor);
}

}  // namespace detail

/// D_{n-1} of the symbol from the roots of x^r C(x). Exact when all roots
/// are rational; otherwise evaluated in MPFR with precision doubling until
/// two consecutive precisions agree.
inline TrenchData trench_det(const LaurentSymbol& c, std::size_t n, const RootOptions& options = {}) {
  if (n < 1) throw std::invalid_argument("trench_det: n must be >= 1");
  TrenchData out;
  out.n = n;
  out.matrix_size = n;
  const std::size_t r = c.r(), s = c.s();
  if (r + s == 0) {
    Rational v = pow(c[0], static_cast<long>(n));
    out.exact = v;
    out.value = to_double(v);
    out.g0 = out.gn = 1;
    return out;
  }
  {
    PrecisionScope scope(options.initial_digits);
    out.roots = detail::symbol_roots(c, Real("1e-40"), options);
  }
  const bool all_rational =
      std::all_of(out.roots.begin(), out.roots.end(), [](const SymbolRoot& x) { return x.exact.has_value(); });
  if (all_rational) {
    Rational g0 = detail::exact_gamma_det(out.roots, detail::trench_exponents(r, s, 0));
    if (g0 == 0) throw numeric_failure("trench_det: G_0 vanishes");
    Rational gn = detail::exact_gamma_det(out.roots, detail::trench_exponents(r, s, n));
    Rational v = pow(c[static_cast<long>(s)], static_cast<long>(n)) * gn / g0;
    if ((n * s) % 2 == 1) v = -v;
    out.exact = v;
    out.value = to_double(v);
    out.g0 = to_double(g0);
    out.gn = to_double(gn);
    out.digits = 0;
    return out;
  }
  std::optional<ComplexReal> previous;
  for (unsigned digits = options.initial_digits; digits <= options.max_digits; digits *= 2) {
    PrecisionScope scope(digits);
    auto roots = detail::symbol_roots(c, pow(Real(10), -Real(digits) * 3 / 4), options);
    ComplexReal g0, gn;
    ComplexReal v = detail::trench_value_mp(c, n, roots, &g0, &gn);
    if (abs(g0) < pow(Real(10), -Real(digits) / 2)) continue;
    if (previous) {
      Real diff = abs(v - *previous) + abs(v.im);
      Real mag = abs(v);
      if (diff <= mag * pow(Real(10), -Real(digits) / 4) + pow(Real(10), -Real(digits) / 2)) {
        out.roots = std::move(roots);
        out.value = to_double(v.re);
        out.error = std::nextafter(to_double(diff) + std::abs(out.value) * 1e-16, INFINITY);
        out.g0 = to_std(g0);
        out.gn = to_std(gn);
        out.digits = digits;
        return out;
      }
    }
    previous = v;
  }
  throw numeric_failure("trench_det: G_0 or the result did not stabilise within " +
                        std::to_string(options.max_digits) + " digits");
}

// ---------------------------------------------------------------------------
// Gram determinants

struct GramResult {
  Rational determinant;
  std::size_t count = 0;
};

inline RatMatrix gram_matrix(std::span<const std::vector<Rational>> vectors) {
  const std::size_t k = vectors.size();
  for (const auto& v : vectors)
    if (v.size() != vectors.front().size()) throw std::invalid_argument("gram: vectors must have equal length");
  RatMatrix g(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i; j < k; ++j) {
      Rational dot = 0;
      for (std::size_t c = 0; c < vectors[i].size(); ++c) dot += vectors[i][c] * vectors[j][c];
      g(i, j) = g(j, i) = dot;
    }
  return g;
}

inline GramResult gram_det(std::span<const std::vector<Rational>> vectors) {
  if (vectors.empty()) return {Rational(1), 0};
  return {determinant(gram_matrix(vectors)), vectors.size()};
}

/// Rows of [B]_l as rational vectors of length l + deg B.
inline std::vector<std::vector<Rational>> band_rows(std::span<const Rational> b, std::size_t ell) {
  RatMatrix m = band_matrix<Rational>(b, ell);
  std::vector<std::vector<Rational>> rows;
  for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(m.row_vector(i));
  return rows;
}

/// det G(e_{s_1}, ..., e_{s_q}, B_1, ..., B_l) / det G(B_1, ..., B_l) with
/// B = A / a_d and S a set of 1-based standard-basis indices.
inline Rational lyons_ratio(const IntPolynomial& a, std::span<const std::size_t> subset, std::size_t ell) {
  require_nonzero_constant(a);
  if (ell < 1) throw std::invalid_argument("lyons_ratio: l must be >= 1");
  const std::size_t d = a.degree();
  std::set<std::size_t> seen;
  for (std::size_t s : subset) {
    if (s < 1 || s > d) throw std::invalid_argument("lyons_ratio: indices must lie in 1..d");
    if (!seen.insert(s).second) throw std::invalid_argument("lyons_ratio: indices must be distinct");
  }
  std::vector<Rational> b;
  for (const auto& x : a.coeffs()) b.push_back(Rational(x) / Rational(a.leading()));
  auto rows = band_rows(b, ell);
  Rational den = gram_det(rows).determinant;
  std::vector<std::vector<Rational>> aug;
  for (std::size_t s : subset) {
    std::vector<Rational> e(ell + d, Rational(0));
    e[s - 1] = 1;
    aug.push_back(std::move(e));
  }
  aug.insert(aug.end(), rows.begin(), rows.end());
  return gram_det(aug).determinant / den;
}

struct LyonsPoint {
  std::size_t ell;
  Rational ratio;
};

struct LyonsReport {
  std::vector<LyonsPoint> points;
  /// max |ratio(l) - ratio(l')| over l, l' in the window [lo, hi]
  double fluctuation(std::size_t lo, std::size_t hi) const {
    double mn = INFINITY, mx = -INFINITY;
    for (const auto& p : points)
      if (p.ell >= lo && p.ell <= hi) {
        double v = to_double(p.ratio);
        mn = std::min(mn, v);
        mx = std::max(mx, v);
      }
    return mx >= mn ? mx - mn : 0.0;
  }
};

inline LyonsReport lyons_convergence(const IntPolynomial& a, std::span<const std::size_t> subset,
                                     std::size_t ell_max) {
  LyonsReport rep;
  for (std::size_t ell = 1; ell <= ell_max; ++ell) rep.points.push_back({ell, lyons_ratio(a, subset, ell)});
  return rep;
}

// ---------------------------------------------------------------------------
// Biorthonormal bases

struct BiorthonormalReport {
  bool gram_product_identity = false;        // G(u) G(v) = I
  std::vector<bool> complementary_minors;    // det G(u_1..u_k) == det G(v_{k+1}..v_n), k = 1..n-1
  bool holds() const {
    return gram_product_identity &&
           std::all_of(complementary_minors.begin(), complementary_minors.end(), [](bool b) { return b; });
  }
};

inline BiorthonormalReport biorthonormal_check(std::span<const std::vector<Rational>> u,
                                               std::span<const std::vector<Rational>> v) {
  const std::size_t n = u.size();
  if (v.size() != n) throw std::invalid_argument("biorthonormal_check: families must have equal size");
  for (const auto& x : u)
    if (x.size() != n) throw std::invalid_argument("biorthonormal_check: vectors must have length n");
  for (const auto& x : v)
    if (x.size() != n) throw std::invalid_argument("biorthonormal_check: vectors must have length n");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Rational dot = 0;
      for (std::size_t c = 0; c < n; ++c) dot += u[i][c] * v[j][c];
      if (dot != (i == j ? 1 : 0)) throw domain_error("biorthonormal_check: families are not biorthonormal");
    }
  BiorthonormalReport rep;
  rep.gram_product_identity = gram_matrix(u) * gram_matrix(v) == RatMatrix::identity(n);
  for (std::size_t k = 1; k < n; ++k)
    rep.complementary_minors.push_back(gram_det(u.subspan(0, k)).determinant ==
                                       gram_det(v.subspan(k)).determinant);
  return rep;
}

// ---------------------------------------------------------------------------
// Growth of D_l / D_{l-1}

struct GrowthPoint {
  std::size_t ell;
  Rational det;    // D_ell of B(x)B(1/x)
  double ratio;    // D_ell / D_{ell-1}; 0 for ell = 0
};

inline std::vector<GrowthPoint> toeplitz_growth(const IntPolynomial& b, std::size_t ell_max) {
  const LaurentSymbol c = symbol_of(b);
  std::vector<GrowthPoint> out;
  for (std::size_t ell = 0; ell <= ell_max; ++ell) {
    Rational det = toeplitz_det_direct(c, ell);
    double ratio = ell == 0 ? 0.0 : to_double(Rational(det / out.back().det));
    out.push_back({ell, det, ratio});
  }
  return out;
}

}  // namespace kronrec
