#pragma once

// epsilon-density of the orbit closure Q(A) = { v : [A]_l v in Z^l } on the
// torus: Mahler-measure bounds, the constructive two-stage density witness
// (B-stage rounding, C-stage triangular inverse), exact zonotope covering
// tests, grid estimates of the critical epsilon, and volume certificates of
// non-density.

#include "kronrec/exact_linalg.hpp"
#include "kronrec/lattice_structure.hpp"
#include "kronrec/poly_core.hpp"
#include "kronrec/recurrence_matrices.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace kronrec {

// ---------------------------------------------------------------------------
// Bounds

struct DensityBound {
  Enclosure eps_half_scaled;    // 1 / M(A(x/2))
  Enclosure eps_double_scaled;  // 2^d / M(A(2x))
  Enclosure eps_stated;         // min of the two
  Enclosure eps_refined;        // 1 / (|a_d| prod max{|alpha|, 1-|alpha|}), best orientation
  Enclosure eps_coarse;         // 2^{floor(d/2)} / M(A)
  bool refined_uses_conjugate = false;
};

namespace detail {

inline std::pair<Real, Real> refined_factor(const Real& lo, const Real& hi) {
  auto f = [](const Real& x) { return x > 1 - x ? x : Real(1 - x); };
  Real half(0.5);
  Real fmin = (lo <= half && half <= hi) ? half : (f(lo) < f(hi) ? f(lo) : f(hi));
  Real fmax = f(lo) > f(hi) ? f(lo) : f(hi);
  return {fmin, fmax};
}

inline RealInterval interval_min(const RealInterval& a, const RealInterval& b) {
  return {a.lo < b.lo ? a.lo : b.lo, a.hi < b.hi ? a.hi : b.hi};
}

inline Real root_target() { return Real("1e-30"); }

}  // namespace detail

inline DensityBound epsilon_bound(const IntPolynomial& a, const RootOptions& options = {}) {
  require_nonzero_constant(a);
  require_primitive(a);
  if (a.degree() < 1) throw domain_error("epsilon_bound needs degree >= 1");
  PrecisionScope scope(options.initial_digits);
  const auto rts = roots_mp(a, detail::root_target(), options);
  const IntPolynomial conj_a = conjugate(a);
  const auto conj_rts = roots_mp(conj_a, detail::root_target(), options);

  auto half = reciprocal(root_product_interval(a.leading(), rts, [](const Real& lo, const Real& hi) {
    return max_with(Real(0.5), lo, hi);
  }));
  auto dbl = reciprocal(root_product_interval(a.leading(), rts, [](const Real& lo, const Real& hi) {
    return max_with(Real(1), Real(lo / 2), Real(hi / 2));
  }));
  auto plain = root_product_interval(a.leading(), rts, [](const Real& lo, const Real& hi) {
    return max_with(Real(1), lo, hi);
  });
  Real pow2 = boost::multiprecision::pow(Real(2), static_cast<int>(a.degree() / 2));
  RealInterval coarse = reciprocal(plain);
  coarse.lo *= pow2;
  coarse.hi *= pow2;
  auto refined_a = reciprocal(root_product_interval(a.leading(), rts, detail::refined_factor));
  auto refined_c = reciprocal(root_product_interval(conj_a.leading(), conj_rts, detail::refined_factor));

  DensityBound out;
  out.eps_half_scaled = to_enclosure(half);
  out.eps_double_scaled = to_enclosure(dbl);
  out.eps_stated = to_enclosure(detail::interval_min(half, dbl));
  out.eps_coarse = to_enclosure(coarse);
  out.refined_uses_conjugate = refined_c.hi + refined_c.lo < refined_a.hi + refined_a.lo;
  out.eps_refined = to_enclosure(detail::interval_min(refined_a, refined_c));
  return out;
}

// ---------------------------------------------------------------------------
// Real factorization A = B C with C monic carrying the roots of modulus <= 1/2

struct RealFactorization {
  std::vector<double> b;  // ascending coefficients, b.back() == a_d
  std::vector<double> c;  // ascending coefficients, monic
  std::vector<Root> b_roots;
  std::vector<Root> c_roots;
  double delta = 0;       // 1 / |b_0|
  Enclosure eps;          // delta * prod 1 / (1 - |gamma|)
};

namespace detail {

inline std::vector<ComplexReal> expand_roots(const std::vector<HighPrecisionRoot>& rts, const Real& lead) {
  std::vector<ComplexReal> poly{ComplexReal(lead)};
  for (const auto& r : rts)
    for (int k = 0; k < r.multiplicity; ++k) {
      std::vector<ComplexReal> next(poly.size() + 1);
      for (std::size_t i = 0; i < poly.size(); ++i) {
        next[i + 1] += poly[i];
        next[i] -= poly[i] * r.value;
      }
      poly = std::move(next);
    }
  return poly;
}

inline Root to_root(const HighPrecisionRoot& r) {
  return {to_std(r.value), r.multiplicity, std::nextafter(to_double(r.radius), INFINITY)};
}

}  // namespace detail

inline RealFactorization factor_real(const IntPolynomial& a, const RootOptions& options = {}) {
  require_nonzero_constant(a);
  if (a.degree() < 1) throw domain_error("factor_real needs degree >= 1");
  PrecisionScope scope(options.initial_digits);
  const auto rts = roots_mp(a, detail::root_target(), options);
  std::vector<HighPrecisionRoot> small, large;
  const Real half(0.5);
  for (const auto& r : rts) (abs(r.value) + r.radius <= half ? small : large).push_back(r);

  RealFactorization out;
  for (const auto& z : detail::expand_roots(large, Real(a.leading()))) out.b.push_back(to_double(z.re));
  for (const auto& z : detail::expand_roots(small, Real(1))) out.c.push_back(to_double(z.re));
  for (const auto& r : large) out.b_roots.push_back(detail::to_root(r));
  for (const auto& r : small) out.c_roots.push_back(detail::to_root(r));

  // |b_0| = |a_d| prod |beta|, enclosed from the root disks.
  RealInterval b0 = root_product_interval(a.leading(), large, [](const Real& lo, const Real& hi) {
    return std::pair<Real, Real>{lo, hi};
  });
  RealInterval eps = reciprocal(b0);
  for (const auto& r : small) {
    Real mod = abs(r.value);
    for (int k = 0; k < r.multiplicity; ++k) {
      eps.lo /= 1 - (mod > r.radius ? Real(mod - r.radius) : Real(0));
      eps.hi /= 1 - (mod + r.radius);
    }
  }
  out.delta = to_double(Real(1 / ((b0.lo + b0.hi) / 2)));
  out.eps = to_enclosure(eps);
  return out;
}

/// The smaller of the constructive epsilons of A and of its conjugate
/// (Q of the conjugate is Q(A) with coordinates reversed).
struct ConstructiveEpsilon {
  Enclosure eps;
  bool use_conjugate = false;
};

inline ConstructiveEpsilon constructive_epsilon(const IntPolynomial& a, const RootOptions& options = {}) {
  auto fa = factor_real(a, options);
  auto fc = factor_real(conjugate(a), options);
  if (fc.eps.value < fa.eps.value) return {fc.eps, true};
  return {fa.eps, false};
}

// ---------------------------------------------------------------------------
// Witnesses

struct DensityWitness {
  std::vector<double> target;
  std::vector<double> w;       // perturbation, |w|_inf <= eps/2
  std::vector<Integer> k;      // [A]_l (target + w) ~= k
  double residual = 0;         // |[A]_l (target + w) - k|_inf
  double eps_used = 0;
  double eps_constructive = 0;
  bool used_conjugate = false;
};

inline constexpr double kWitnessNormSlack = 1e-9;
inline constexpr double kWitnessResidualTolerance = 1e-6;

namespace detail {

inline std::vector<long double> apply_band(const IntPolynomial& a, std::span<const long double> x) {
  const std::size_t d = a.degree(), ell = x.size() - d;
  std::vector<long double> out(ell, 0.0L);
  for (std::size_t i = 0; i < ell; ++i)
    for (std::size_t j = 0; j <= d; ++j) out[i] += a[j].convert_to<long double>() * x[i + j];
  return out;
}

/// B-stage then C-stage for a fixed orientation; returns w.
inline std::vector<double> witness_perturbation(const IntPolynomial& a, const RealFactorization& f,
                                                std::span<const double> target) {
  const std::size_t m = target.size(), d = a.degree(), ell = m - d;
  const std::size_t s = f.b.size() - 1, t = f.c.size() - 1;
  std::vector<long double> tgt(target.begin(), target.end());
  auto image = apply_band(a, tgt);
  std::vector<long double> v(ell);
  for (std::size_t i = 0; i < ell; ++i) {
    long double x = -image[i];
    v[i] = x - std::floor(x);
  }
  // [B]_l w' == v (mod 1), |w'_i| <= delta/2, trailing s coordinates zero.
  std::vector<long double> wp(ell + s, 0.0L);
  for (std::size_t i = ell; i-- > 0;) {
    long double rest = -v[i];
    for (std::size_t j = 1; j <= s; ++j) rest += static_cast<long double>(f.b[j]) * wp[i + j];
    wp[i] = (std::nearbyint(rest) - rest) / static_cast<long double>(f.b[0]);
  }
  // {C}_m w = (0,...,0, w') by forward substitution; {C}_m has unit diagonal.
  std::vector<long double> z(m, 0.0L), w(m, 0.0L);
  for (std::size_t i = 0; i < ell + s; ++i) z[t + i] = wp[i];
  for (std::size_t i = 0; i < m; ++i) {
    long double acc = z[i];
    for (std::size_t j = (i >= t ? i - t : 0); j < i; ++j)
      acc -= static_cast<long double>(f.c[t - (i - j)]) * w[j];
    w[i] = acc;
  }
  return {w.begin(), w.end()};
}

}  // namespace detail

inline DensityWitness witness(const IntPolynomial& a, std::size_t m, std::span<const double> target,
                              double eps, const RootOptions& options = {}) {
  require_nonzero_constant(a);
  require_primitive(a);
  const std::size_t d = a.degree();
  if (m <= d) throw std::invalid_argument("witness: m must exceed deg A");
  if (target.size() != m) throw std::invalid_argument("witness: target must have length m");
  const IntPolynomial conj_a = conjugate(a);
  auto fa = factor_real(a, options);
  auto fc = factor_real(conj_a, options);
  const bool use_conj = fc.eps.value < fa.eps.value;
  const RealFactorization& f = use_conj ? fc : fa;
  if (eps < f.eps.value - 1e-12)
    throw domain_error("witness: eps = " + std::to_string(eps) + " is below the constructive bound " +
                       std::to_string(f.eps.value));

  DensityWitness out;
  out.target.assign(target.begin(), target.end());
  out.eps_used = eps;
  out.eps_constructive = f.eps.value;
  out.used_conjugate = use_conj;
  if (use_conj) {
    std::vector<double> rev(target.rbegin(), target.rend());
    auto w = detail::witness_perturbation(conj_a, f, rev);
    out.w.assign(w.rbegin(), w.rend());
  } else {
    out.w = detail::witness_perturbation(a, f, target);
  }
  std::vector<long double> x(m);
  for (std::size_t i = 0; i < m; ++i) x[i] = static_cast<long double>(target[i]) + out.w[i];
  auto image = detail::apply_band(a, x);
  for (long double y : image) {
    long double r = std::nearbyint(y);
    out.k.emplace_back(static_cast<long long>(r));
    out.residual = std::max(out.residual, static_cast<double>(std::fabs(y - r)));
  }
  double wmax = 0;
  for (double wi : out.w) wmax = std::max(wmax, std::fabs(wi));
  if (wmax > eps / 2 + kWitnessNormSlack)
    throw numeric_failure("witness: perturbation norm " + std::to_string(wmax) + " exceeds eps/2");
  if (out.residual > kWitnessResidualTolerance)
    throw numeric_failure("witness: residual " + std::to_string(out.residual) + " exceeds tolerance");
  return out;
}

// ---------------------------------------------------------------------------
// Covering: is v + k in [A]_l [-eps/2, eps/2]^m for some integer k?

/// Facet description of the zonotope Z(1) = [A]_l [-1/2, 1/2]^m. Every
/// facet normal of a zonotope is orthogonal to l-1 of its generators, so
/// b in eps Z(1) iff |n.b| <= eps h(n) for all normals n, where
/// h(n) = (1/2) sum_j |n.g_j| is the support function.
class CoveringGeometry {
 public:
  CoveringGeometry(const IntPolynomial& a, std::size_t m) : d_(a.degree()), m_(m) {
    require_nonzero_constant(a);
    if (m <= d_) throw std::invalid_argument("covering: m must exceed deg A");
    ell_ = m - d_;
    const IntMatrix g = band_matrix(a, ell_);
    half_width_ = Rational(a.l1_norm()) / 2;
    std::set<std::vector<Integer>> normals;
    if (ell_ == 1) {
      normals.insert({Integer(1)});
    } else {
      std::vector<std::size_t> cols(ell_ - 1);
      for_each_subset(m, ell_ - 1, cols, 0, 0, [&] {
        std::vector<Integer> n(ell_);
        bool nonzero = false;
        for (std::size_t i = 0; i < ell_; ++i) {
          IntMatrix minor(ell_ - 1, ell_ - 1);
          for (std::size_t r = 0, rr = 0; r < ell_; ++r) {
            if (r == i) continue;
            for (std::size_t c = 0; c < ell_ - 1; ++c) minor(rr, c) = g(r, cols[c]);
            ++rr;
          }
          n[i] = determinant(std::move(minor));
          if (i % 2) n[i] = -n[i];
          nonzero = nonzero || n[i] != 0;
        }
        if (!nonzero) return;
        Integer gg = 0;
        for (const auto& x : n) gg = gcd(gg, x);
        for (auto& x : n) x /= gg;
        auto first = std::find_if(n.begin(), n.end(), [](const Integer& x) { return x != 0; });
        if (*first < 0)
          for (auto& x : n) x = -x;
        normals.insert(std::move(n));
      });
    }
    for (const auto& n : normals) {
      Integer support = 0;
      for (std::size_t j = 0; j < m; ++j) {
        Integer dot = 0;
        for (std::size_t i = 0; i < ell_; ++i) dot += n[i] * g(i, j);
        support += abs(dot);
      }
      normals_.push_back(n);
      support_.push_back(Rational(support) / 2);
      std::vector<long double> nf;
      for (const auto& x : n) nf.push_back(x.convert_to<long double>());
      normals_ld_.push_back(std::move(nf));
      support_ld_.push_back(support_.back().convert_to<long double>());
    }
    // Largest r with [-r, r]^l inside Z(1): r |n|_1 <= h(n) for all n.
    bool first = true;
    for (std::size_t q = 0; q < normals_.size(); ++q) {
      Integer l1 = 0;
      for (const auto& x : normals_[q]) l1 += abs(x);
      Rational r = support_[q] / Rational(l1);
      if (first || r < inradius_) inradius_ = r;
      first = false;
    }
  }

  std::size_t ell() const { return ell_; }
  std::size_t m() const { return m_; }
  std::size_t normal_count() const { return normals_.size(); }
  /// Z(1) lies in the cube of this half-width (row sums of |[A]_l| / 2).
  const Rational& half_width() const { return half_width_; }
  const Rational& inradius() const { return inradius_; }

  /// Smallest eps with b in Z(eps).
  Rational gauge(std::span<const Rational> b) const {
    Rational best = 0;
    for (std::size_t q = 0; q < normals_.size(); ++q) {
      Rational dot = 0;
      for (std::size_t i = 0; i < ell_; ++i) dot += Rational(normals_[q][i]) * b[i];
      Rational g = abs(dot) / support_[q];
      if (g > best) best = g;
    }
    return best;
  }

  long double gauge(std::span<const long double> b) const {
    long double best = 0;
    for (std::size_t q = 0; q < normals_ld_.size(); ++q) {
      long double dot = 0;
      for (std::size_t i = 0; i < ell_; ++i) dot += normals_ld_[q][i] * b[i];
      best = std::max(best, std::fabs(dot) / support_ld_[q]);
    }
    return best;
  }

  /// min over k in Z^l of gauge(v + k); the covering threshold of v.
  long double point_threshold(std::span<const long double> v) const {
    std::vector<long double> x(ell_);
    for (std::size_t i = 0; i < ell_; ++i) x[i] = v[i] - std::nearbyint(v[i]);
    long double best = gauge(std::span<const long double>(x));
    const long double hw = half_width_.convert_to<long double>();
    std::vector<long> lo(ell_), hi(ell_), k(ell_);
    const long double radius = best * hw + 1e-12L;
    for (std::size_t i = 0; i < ell_; ++i) {
      lo[i] = static_cast<long>(std::ceil(-v[i] - radius));
      hi[i] = static_cast<long>(std::floor(-v[i] + radius));
      k[i] = lo[i];
    }
    for (;;) {
      for (std::size_t i = 0; i < ell_; ++i) x[i] = v[i] + static_cast<long double>(k[i]);
      best = std::min(best, gauge(std::span<const long double>(x)));
      std::size_t i = 0;
      while (i < ell_ && k[i] == hi[i]) {
        k[i] = lo[i];
        ++i;
      }
      if (i == ell_) break;
      ++k[i];
    }
    return best;
  }

  /// Exact covering decision for rational eps and v.
  bool covered(const Rational& eps, std::span<const Rational> v) const {
    const Rational radius = eps * half_width_;
    std::vector<Integer> lo(ell_), hi(ell_), k(ell_);
    for (std::size_t i = 0; i < ell_; ++i) {
      lo[i] = ceil_rat(-v[i] - radius);
      hi[i] = floor_rat(-v[i] + radius);
      if (lo[i] > hi[i]) return false;
      k[i] = lo[i];
    }
    std::vector<Rational> x(ell_);
    for (;;) {
      for (std::size_t i = 0; i < ell_; ++i) x[i] = v[i] + Rational(k[i]);
      if (gauge(std::span<const Rational>(x)) <= eps) return true;
      std::size_t i = 0;
      while (i < ell_ && k[i] == hi[i]) {
        k[i] = lo[i];
        ++i;
      }
      if (i == ell_) return false;
      ++k[i];
    }
  }

  template <class F>
  static void for_each_subset(std::size_t n, std::size_t size, std::vector<std::size_t>& pick,
                              std::size_t start, std::size_t depth, F&& f) {
    if (depth == size) {
      f();
      return;
    }
    for (std::size_t i = start; i + (size - depth) <= n; ++i) {
      pick[depth] = i;
      for_each_subset(n, size, pick, i + 1, depth + 1, f);
    }
  }

 private:
  static Integer floor_rat(const Rational& q) { return detail::floor_div(numerator(q), denominator(q)); }
  static Integer ceil_rat(const Rational& q) { return -detail::floor_div(-numerator(q), denominator(q)); }

  std::size_t d_, m_, ell_ = 0;
  Rational half_width_;
  Rational inradius_;
  std::vector<std::vector<Integer>> normals_;
  std::vector<Rational> support_;
  std::vector<std::vector<long double>> normals_ld_;
  std::vector<long double> support_ld_;
};

/// True iff some w in [-eps/2, eps/2]^m and k in Z^l satisfy [A]_l w = v + k.
inline bool is_covered(const IntPolynomial& a, std::size_t m, const Rational& eps, std::span<const Rational> v) {
  CoveringGeometry geom(a, m);
  if (v.size() != geom.ell()) throw std::invalid_argument("is_covered: v must have length m - d");
  if (eps < 0) throw std::invalid_argument("is_covered: eps must be nonnegative");
  return geom.covered(eps, v);
}

/// Decided exactly on the rational values of the doubles eps and v.
inline bool is_covered(const IntPolynomial& a, std::size_t m, double eps, std::span<const double> v) {
  std::vector<Rational> q;
  for (double x : v) q.push_back(to_rational(x));
  return is_covered(a, m, to_rational(eps), std::span<const Rational>(q));
}

// ---------------------------------------------------------------------------
// Critical epsilon on a target grid

struct CriticalEpsilonOptions {
  std::size_t grid_n = 12;
  std::size_t max_ell = 4;
  bool allow_large = false;
};

struct CriticalEpsilonEstimate {
  std::size_t m = 0;
  double lower = 0;       // some grid target is uncovered for every eps below this
  double upper = 0;       // every torus target is covered at this eps
  double grid_value = 0;  // max over grid targets of the exact covering threshold
  double margin = 0;      // grid-to-torus margin added to grid_value
  double constructive_cap = 0; // constructive bound (upper enclosure)
  std::size_t grid_n = 0;
  std::vector<double> worst_target;
  std::string notes;
};

inline CriticalEpsilonEstimate critical_epsilon(const IntPolynomial& a, std::size_t m,
                                                const CriticalEpsilonOptions& options = {}) {
  require_nonzero_constant(a);
  require_primitive(a);
  if (options.grid_n < 1) throw std::invalid_argument("critical_epsilon: grid_n must be >= 1");
  if (m <= a.degree()) throw std::invalid_argument("critical_epsilon: m must exceed deg A");
  const std::size_t ell = m - a.degree();
  if (ell > options.max_ell && !options.allow_large)
    throw domain_error("critical_epsilon: l = " + std::to_string(ell) + " exceeds the grid guard " +
                       std::to_string(options.max_ell) + " (pass the override to force)");
  CoveringGeometry geom(a, m);
  const std::size_t n = options.grid_n;
  std::vector<std::size_t> idx(ell, 0);
  std::vector<long double> v(ell);
  long double worst = 0;
  std::vector<double> worst_v(ell, 0.0);
  for (;;) {
    for (std::size_t i = 0; i < ell; ++i) v[i] = static_cast<long double>(idx[i]) / static_cast<long double>(n);
    long double t = geom.point_threshold(std::span<const long double>(v));
    if (t > worst) {
      worst = t;
      for (std::size_t i = 0; i < ell; ++i) worst_v[i] = static_cast<double>(v[i]);
    }
    std::size_t i = 0;
    while (i < ell && idx[i] + 1 == n) {
      idx[i] = 0;
      ++i;
    }
    if (i == ell) break;
    ++idx[i];
  }
  CriticalEpsilonEstimate out;
  out.m = m;
  out.grid_n = n;
  out.grid_value = static_cast<double>(worst);
  out.lower = out.grid_value;
  // Every torus point is within 1/(2n) (sup norm) of a grid point, and
  // Z(delta) contains the cube of half-width delta * inradius.
  out.margin = 1.0 / (2.0 * static_cast<double>(n) * geom.inradius().convert_to<double>());
  out.constructive_cap = constructive_epsilon(a).eps.upper();
  out.upper = std::min(out.grid_value + out.margin, out.constructive_cap);
  out.worst_target = worst_v;
  out.notes = "exact covering thresholds (zonotope gauge over " + std::to_string(geom.normal_count()) +
              " facet normals) on a " + std::to_string(n) + "^" + std::to_string(ell) +
              " target grid; upper = min(grid + 1/(2 n inradius), constructive bound)";
  return out;
}

// ---------------------------------------------------------------------------
// Non-density certificate

struct NonDensityCertificate {
  std::size_t m = 0;
  double eps = 0;
  Rational volume;          // exact Vol(Pi) for the HNF basis of Lambda_m
  double volume_bound = 0;  // upper rounding of volume
  double gram_bound = 0;    // Cauchy-Schwarz bound via Gram determinants (>= volume)
  bool certified = false;   // volume < 1
};

/// Pi is the zonotope spanned by eps e_1..eps e_m and an HNF basis of
/// Lambda_m. Its volume is the sum over m-subsets of generators of |det|,
/// i.e. sum_p eps^{m-p} sum_{|R| = p} sum_{|J| = p} |det omega_{R,J}|.
/// Volume < 1 rules out eps'-density for every eps' < eps.
inline NonDensityCertificate certify_non_density(const IntPolynomial& a, std::size_t m, const Rational& e) {
  require_nonzero_constant(a);
  require_primitive(a);
  const std::size_t d = a.degree();
  if (m <= d) throw std::invalid_argument("certify_non_density: m must exceed deg A");
  if (e <= 0 || e > 1) throw std::invalid_argument("certify_non_density: eps must be in (0, 1]");
  const IntMatrix omega = integral_basis(a, m).Z;
  NonDensityCertificate out;
  out.m = m;
  out.eps = to_double(e);
  out.volume = 0;
  double gram = 0;
  auto binom = [](std::size_t n, std::size_t k) {
    double b = 1;
    for (std::size_t i = 1; i <= k; ++i) b = b * static_cast<double>(n - k + i) / static_cast<double>(i);
    return b;
  };
  for (std::size_t p = 0; p <= d; ++p) {
    const Rational weight = pow(e, static_cast<long>(m - p));
    std::vector<std::size_t> rows(p), cols(p);
    CoveringGeometry::for_each_subset(d, p, rows, 0, 0, [&] {
      Integer minors = 0;
      CoveringGeometry::for_each_subset(m, p, cols, 0, 0, [&] {
        IntMatrix sub(p, p);
        for (std::size_t i = 0; i < p; ++i)
          for (std::size_t j = 0; j < p; ++j) sub(i, j) = omega(rows[i], cols[j]);
        minors += abs(determinant(std::move(sub)));
      });
      out.volume += weight * Rational(minors);
      IntMatrix gm(p, p);
      for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j) {
          Integer dot = 0;
          for (std::size_t c = 0; c < m; ++c) dot += omega(rows[i], c) * omega(rows[j], c);
          gm(i, j) = dot;
        }
      gram += to_double(weight) * std::sqrt(binom(m, p) * to_double(determinant(std::move(gm))));
    });
  }
  out.volume_bound = std::nextafter(to_double(out.volume), INFINITY);
  out.gram_bound = std::nextafter(gram * (1 + 1e-12), INFINITY);
  out.certified = out.volume < 1;
  return out;
}

inline NonDensityCertificate certify_non_density(const IntPolynomial& a, std::size_t m, double eps) {
  if (!std::isfinite(eps)) throw std::invalid_argument("certify_non_density: eps must be finite");
  return certify_non_density(a, m, to_rational(eps));
}

}  // namespace kronrec
