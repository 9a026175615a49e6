#pragma once

// Structure of the lattice of integral recurrences of fixed length m:
// p-adic Newton polygons, the rational basis N of Theta_m, the canonical
// p-adic basis M with its block/valuation certificate, the integral basis of
// Lambda_m with its index in Theta_m, and the det N_xi / det U minor identity.

#include "kronrec/exact_linalg.hpp"
#include "kronrec/poly_core.hpp"
#include "kronrec/recurrence_matrices.hpp"

#include <string>
#include <vector>

namespace kronrec {

struct NewtonVertex {
  std::size_t index;  // w_k
  long valuation;     // v_p(a_{w_k})
  friend bool operator==(const NewtonVertex&, const NewtonVertex&) = default;
};

struct NewtonPolygon {
  Integer p;
  std::vector<NewtonVertex> vertices;  // w_0 = 0, ..., w_r = d
  std::vector<Rational> slopes;        // sigma_1 < ... < sigma_r
  std::vector<std::size_t> lengths;    // l_k = w_k - w_{k-1}
  std::size_t s = 1;                   // first k with sigma_k >= 0 (r + 1 if none)
  std::size_t s_strict = 1;            // first k with sigma_k > 0 (r + 1 if none)

  std::size_t segments() const { return slopes.size(); }
  std::size_t w(std::size_t k) const { return vertices[k].index; }
};

enum class PivotRule { nonnegative, positive };

/// Lower convex hull of (i, v_p(a_i)) over the nonzero coefficients.
inline NewtonPolygon newton_polygon(const IntPolynomial& a, const Integer& p) {
  require_prime(p);
  require_nonzero_constant(a);
  std::vector<NewtonVertex> hull;
  for (std::size_t i = 0; i <= a.degree(); ++i) {
    if (a[i] == 0) continue;
    NewtonVertex pt{i, p_adic_valuation(a[i], p).value()};
    // Pop while the last two hull points and pt do not make a strict left turn.
    while (hull.size() >= 2) {
      const auto& o = hull[hull.size() - 2];
      const auto& q = hull.back();
      long cross = static_cast<long>(q.index - o.index) * (pt.valuation - o.valuation) -
                   (q.valuation - o.valuation) * static_cast<long>(pt.index - o.index);
      if (cross > 0) break;
      hull.pop_back();
    }
    hull.push_back(pt);
  }
  NewtonPolygon np{p, hull, {}, {}, 0, 0};
  for (std::size_t k = 1; k < hull.size(); ++k) {
    std::size_t len = hull[k].index - hull[k - 1].index;
    np.lengths.push_back(len);
    np.slopes.emplace_back(hull[k].valuation - hull[k - 1].valuation, static_cast<long>(len));
  }
  const std::size_t r = np.slopes.size();
  np.s = r + 1;
  np.s_strict = r + 1;
  for (std::size_t k = r; k >= 1; --k) {
    if (np.slopes[k - 1] >= 0) np.s = k;
    if (np.slopes[k - 1] > 0) np.s_strict = k;
  }
  return np;
}

/// d x m rational basis of Theta_m: N_{ij} = delta_{ij} for j <= d, each row
/// extended by the recurrence.
inline RatMatrix basis_N(const IntPolynomial& a, std::size_t m) {
  const std::size_t d = a.degree();
  if (m < d) throw std::invalid_argument("basis_N: m must be >= d");
  RatMatrix n(d, m);
  for (std::size_t i = 0; i < d; ++i) {
    std::vector<Rational> init(d, Rational(0));
    init[i] = 1;
    auto row = recurrence_extend(a, init, m);
    for (std::size_t j = 0; j < m; ++j) n(i, j) = row[j];
  }
  return n;
}

/// Column set xi = (1..w, m-d+w+1..m), 0-based.
inline std::vector<std::size_t> xi_columns(std::size_t d, std::size_t m, std::size_t w) {
  std::vector<std::size_t> xi;
  for (std::size_t j = 0; j < w; ++j) xi.push_back(j);
  for (std::size_t j = m - d + w; j < m; ++j) xi.push_back(j);
  return xi;
}

struct BlockCertificate {
  std::size_t k;                   // 1-based segment index
  std::size_t row_begin, row_end;  // 0-based half-open row range
  bool b_identity;
  bool c_identity;
  PAdicVal det_valuation;          // of the non-identity block
  Rational expected_valuation;     // -sigma l (m-d) for C_k, sigma l (m-d) for B_k
};

struct CanonicalBasisM {
  Integer p;
  std::size_t m = 0;
  NewtonPolygon polygon;
  PivotRule pivot_rule = PivotRule::nonnegative;
  RatMatrix matrix;
  std::vector<BlockCertificate> blocks;
  std::vector<std::vector<PAdicVal>> valuations;
};

inline std::vector<std::vector<PAdicVal>> valuation_table(const RatMatrix& m, const Integer& p) {
  std::vector<std::vector<PAdicVal>> t(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) t[i].push_back(p_adic_valuation(m(i, j), p));
  return t;
}

inline bool is_identity(const RatMatrix& m) { return m == RatMatrix::identity(m.rows()); }

/// Checks every clause of the canonical-basis characterization for a
/// candidate d x m matrix; returns human-readable violations (empty = valid).
inline std::vector<std::string> certificate_violations(const IntPolynomial& a, const NewtonPolygon& np,
                                                       std::size_t pivot, const RatMatrix& mat,
                                                       std::vector<BlockCertificate>* blocks_out = nullptr) {
  std::vector<std::string> bad;
  const std::size_t d = a.degree(), m = mat.cols();
  const Integer& p = np.p;
  const std::size_t r = np.segments();
  const long ell = static_cast<long>(m - d);
  if (mat.rows() != d) return {"matrix must have d rows"};
  for (std::size_t i = 0; i < d; ++i)
    if (!is_recurrence(a, mat.row(i))) bad.push_back("row " + std::to_string(i + 1) + " is not a recurrence");
  auto block_of = [&](std::size_t idx) {
    std::size_t k = 1;
    while (idx >= np.w(k)) ++k;
    return k;
  };
  for (std::size_t i = 0; i < d; ++i) {
    const std::size_t ki = block_of(i);
    for (std::size_t j = 0; j < d; ++j) {
      const std::size_t kj = block_of(j);
      if (kj < ki && mat(i, j) != 0)
        bad.push_back("left block not upper triangular at (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
      if (kj > ki && mat(i, m - d + j) != 0)
        bad.push_back("right block not lower triangular at (" + std::to_string(i + 1) + "," +
                      std::to_string(m - d + j + 1) + ")");
    }
  }
  for (std::size_t k = 1; k <= r; ++k) {
    const std::size_t lo = np.w(k - 1), hi = np.w(k);
    std::vector<std::size_t> left, right;
    for (std::size_t j = lo; j < hi; ++j) {
      left.push_back(j);
      right.push_back(m - d + j);
    }
    RatMatrix bk = mat.select(lo, hi, left), ck = mat.select(lo, hi, right);
    const Rational sigma = np.slopes[k - 1];
    const Rational len(static_cast<long>(np.lengths[k - 1]));
    BlockCertificate cert{k, lo, hi, is_identity(bk), is_identity(ck), PAdicVal::infinity(), 0};
    if (k < pivot) {
      if (!cert.b_identity) bad.push_back("B_" + std::to_string(k) + " is not the identity");
      cert.det_valuation = p_adic_valuation(determinant(ck), p);
      cert.expected_valuation = -sigma * len * ell;
    } else {
      if (!cert.c_identity) bad.push_back("C_" + std::to_string(k) + " is not the identity");
      cert.det_valuation = p_adic_valuation(determinant(bk), p);
      cert.expected_valuation = sigma * len * ell;
    }
    if (cert.det_valuation.is_infinite() || Rational(cert.det_valuation.value()) != cert.expected_valuation)
      bad.push_back("block " + std::to_string(k) + " determinant valuation " + cert.det_valuation.str() +
                    " != " + to_string(cert.expected_valuation));
    for (std::size_t i = lo; i < hi; ++i) {
      if (k < pivot) {
        for (std::size_t t = 1; i + t < m; ++t)
          if (!p_adic_valuation(mat(i, i + t), p).at_least(-sigma * static_cast<long>(t)))
            bad.push_back("row " + std::to_string(i + 1) + " walk right " + std::to_string(t) + " below slope bound");
      } else {
        const std::size_t one = m - d + i;
        for (std::size_t t = 1; t <= one; ++t)
          if (!p_adic_valuation(mat(i, one - t), p).at_least(sigma * static_cast<long>(t)))
            bad.push_back("row " + std::to_string(i + 1) + " walk left " + std::to_string(t) + " below slope bound");
      }
    }
    if (blocks_out) blocks_out->push_back(cert);
  }
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (!p_adic_valuation(mat(i, j), p).at_least(0))
        bad.push_back("entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ") is not p-integral");
  return bad;
}

/// The unique basis of Lambda_m tensor Z_p with block-identity structure and
/// slope-controlled valuations. Segments before the pivot take xi with
/// w = w_k (identity on the left), the others w = w_{k-1} (identity on the
/// right); rows w_{k-1}+1..w_k of N_xi^{-1} N are kept.
inline CanonicalBasisM canonical_basis_M(const IntPolynomial& a, const Integer& p, std::size_t m,
                                         PivotRule rule = PivotRule::nonnegative) {
  require_prime(p);
  require_nonzero_constant(a);
  require_primitive(a);
  const std::size_t d = a.degree();
  if (m < d) throw std::invalid_argument("canonical_basis_M: m must be >= d");
  CanonicalBasisM out;
  out.p = p;
  out.m = m;
  out.pivot_rule = rule;
  out.polygon = newton_polygon(a, p);
  const NewtonPolygon& np = out.polygon;
  const std::size_t pivot = rule == PivotRule::nonnegative ? np.s : np.s_strict;
  const RatMatrix n = basis_N(a, m);
  out.matrix = RatMatrix(d, m);
  if (m == d) {
    out.matrix = RatMatrix::identity(d);
  } else {
    for (std::size_t k = 1; k <= np.segments(); ++k) {
      const std::size_t w = k < pivot ? np.w(k) : np.w(k - 1);
      const auto xi = xi_columns(d, m, w);
      const RatMatrix n_xi = n.select(0, d, xi);
      RatMatrix q;
      try {
        q = solve_exact(n_xi, n);
      } catch (const domain_error&) {
        throw std::logic_error("canonical_basis_M: N_xi singular for w = " + std::to_string(w));
      }
      for (std::size_t i = np.w(k - 1); i < np.w(k); ++i)
        for (std::size_t j = 0; j < m; ++j) out.matrix(i, j) = q(i, j);
    }
  }
  out.valuations = valuation_table(out.matrix, p);
  if (m > d) {
    auto bad = certificate_violations(a, np, pivot, out.matrix, &out.blocks);
    if (!bad.empty()) throw std::logic_error("canonical_basis_M certificate violated: " + bad.front());
  }
  return out;
}

struct LatticeBases {
  RatMatrix N;      // Z-basis of Theta_m
  IntMatrix Z;      // HNF Z-basis of Lambda_m
  IntMatrix W;      // Z = W N
  Integer index;    // (Theta_m : Lambda_m) = |det W|
  Integer expected; // |a_d|^(m-d)
};

inline LatticeBases integral_basis(const IntPolynomial& a, std::size_t m) {
  require_nonzero_constant(a);
  require_primitive(a);
  const std::size_t d = a.degree();
  if (m < d) throw std::invalid_argument("integral_basis: m must be >= d");
  LatticeBases out;
  out.N = basis_N(a, m);
  out.Z = m == d ? IntMatrix::identity(d) : integer_kernel(band_matrix(a, m - d));
  if (out.Z.rows() != d) throw std::logic_error("integral_basis: kernel rank differs from d");
  out.W = out.Z.block(0, d, 0, d);
  if (to_rational(out.W) * out.N != to_rational(out.Z))
    throw std::logic_error("integral_basis: Z is not W N");
  out.index = abs(determinant(out.W));
  out.expected = pow(abs(a.leading()), static_cast<unsigned>(m - d));
  return out;
}

struct MinorIdentity {
  Rational det_n_xi;
  Integer det_u;
  int sign;   // det N_xi = sign * a_d^{-(m-d)} det U
  bool holds;
};

inline MinorIdentity minor_identity(const IntPolynomial& a, std::size_t w, std::size_t m) {
  const std::size_t d = a.degree();
  if (w > d) throw std::invalid_argument("minor_identity: w must be in 0..d");
  if (m < d) throw std::invalid_argument("minor_identity: m must be >= d");
  const RatMatrix n = basis_N(a, m);
  const auto xi = xi_columns(d, m, w);
  MinorIdentity out;
  out.det_n_xi = determinant(n.select(0, d, xi));
  const std::size_t ell = m - d;
  IntMatrix u(ell, ell);
  for (std::size_t i = 0; i < ell; ++i)
    for (std::size_t j = 0; j < ell; ++j)
      u(i, j) = a.coeff(static_cast<long>(w + i) - static_cast<long>(j));
  out.det_u = determinant(u);
  if (out.det_n_xi == 0 && out.det_u != 0)
    throw std::logic_error("minor_identity: N_xi singular while det U != 0");
  const Rational scaled = Rational(out.det_u) / Rational(pow(a.leading(), static_cast<unsigned>(ell)));
  out.sign = ((d - w) * ell) % 2 == 0 ? 1 : -1;
  if (out.det_n_xi == scaled * out.sign) {
    out.holds = true;
  } else if (out.det_n_xi == -scaled * out.sign) {
    out.sign = -out.sign;
    out.holds = true;
  } else {
    out.holds = false;
  }
  return out;
}

}  // namespace kronrec
