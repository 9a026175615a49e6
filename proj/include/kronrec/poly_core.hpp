#pragma once

// Integer polynomials, certified complex roots and Mahler measures.

#include "kronrec/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace kronrec {

/// A(x) = sum a_i x^i with integer coefficients, stored ascending with the
/// leading coefficient nonzero.
class IntPolynomial {
 public:
  IntPolynomial() = default;
  explicit IntPolynomial(std::vector<Integer> coeffs) : coeffs_(std::move(coeffs)) {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
    if (coeffs_.empty()) throw std::invalid_argument("the zero polynomial is not allowed");
  }
  IntPolynomial(std::initializer_list<long> coeffs)
      : IntPolynomial(std::vector<Integer>(coeffs.begin(), coeffs.end())) {}

  std::size_t degree() const { return coeffs_.size() - 1; }
  const std::vector<Integer>& coeffs() const { return coeffs_; }
  const Integer& operator[](std::size_t i) const { return coeffs_[i]; }
  /// a_i, with zero outside 0..d.
  Integer coeff(long i) const {
    if (i < 0 || i > static_cast<long>(degree())) return 0;
    return coeffs_[static_cast<std::size_t>(i)];
  }
  const Integer& leading() const { return coeffs_.back(); }
  const Integer& constant() const { return coeffs_.front(); }

  Integer content() const {
    Integer g = 0;
    for (const auto& c : coeffs_) g = gcd(g, c);
    return g;
  }
  bool is_primitive() const { return content() == 1; }
  bool has_zero_constant() const { return constant() == 0; }

  /// Sum of |a_i|.
  Integer l1_norm() const {
    Integer s = 0;
    for (const auto& c : coeffs_) s += abs(c);
    return s;
  }

  friend bool operator==(const IntPolynomial&, const IntPolynomial&) = default;

  friend IntPolynomial operator*(const IntPolynomial& p, const IntPolynomial& q) {
    std::vector<Integer> out(p.coeffs_.size() + q.coeffs_.size() - 1, Integer(0));
    for (std::size_t i = 0; i < p.coeffs_.size(); ++i)
      for (std::size_t j = 0; j < q.coeffs_.size(); ++j) out[i + j] += p.coeffs_[i] * q.coeffs_[j];
    return IntPolynomial(std::move(out));
  }

  /// "a0,a1,...,ad"
  std::string str() const {
    std::string s;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      if (i) s += ',';
      s += coeffs_[i].str();
    }
    return s;
  }

 private:
  std::vector<Integer> coeffs_;
};

/// Rejects polynomials that downstream operations cannot accept.
inline void require_nonzero_constant(const IntPolynomial& a) {
  if (a.has_zero_constant()) throw domain_error("polynomial must have nonzero constant coefficient");
}
inline void require_primitive(const IntPolynomial& a) {
  if (!a.is_primitive())
    throw domain_error("polynomial must be primitive (content " + a.content().str() + ")");
}

inline IntPolynomial parse_polynomial(std::string_view text) {
  std::vector<Integer> coeffs;
  std::size_t start = 0;
  bool any = false;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    std::string_view token = text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
    while (!token.empty() && std::isspace(static_cast<unsigned char>(token.front()))) token.remove_prefix(1);
    while (!token.empty() && std::isspace(static_cast<unsigned char>(token.back()))) token.remove_suffix(1);
    if (token.empty()) {
      if (!any && comma == std::string_view::npos) throw std::invalid_argument("empty polynomial");
      throw std::invalid_argument("empty coefficient in '" + std::string(text) + "'");
    }
    std::size_t i = token[0] == '-' ? 1 : 0;
    if (i == token.size()) throw std::invalid_argument("invalid coefficient '" + std::string(token) + "'");
    for (; i < token.size(); ++i)
      if (token[i] < '0' || token[i] > '9')
        throw std::invalid_argument("invalid coefficient '" + std::string(token) + "'");
    coeffs.emplace_back(std::string(token));
    any = true;
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  bool all_zero = std::all_of(coeffs.begin(), coeffs.end(), [](const Integer& c) { return c == 0; });
  if (all_zero) throw std::invalid_argument("all-zero polynomial");
  return IntPolynomial(std::move(coeffs));
}

/// The conjugate polynomial sum a_i x^(d-i).
inline IntPolynomial conjugate(const IntPolynomial& a) {
  require_nonzero_constant(a);
  std::vector<Integer> rev(a.coeffs().rbegin(), a.coeffs().rend());
  return IntPolynomial(std::move(rev));
}

namespace detail {

using RatPoly = std::vector<Rational>;  // ascending, no trailing zeros; empty == 0

inline void trim(RatPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline RatPoly to_rat(const IntPolynomial& a) { return {a.coeffs().begin(), a.coeffs().end()}; }

inline RatPoly derivative(const RatPoly& p) {
  RatPoly d;
  for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * static_cast<long>(i));
  trim(d);
  return d;
}

inline RatPoly sub(RatPoly a, const RatPoly& b) {
  if (a.size() < b.size()) a.resize(b.size(), Rational(0));
  for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
  trim(a);
  return a;
}

inline std::pair<RatPoly, RatPoly> divmod(RatPoly num, const RatPoly& den) {
  if (den.empty()) throw std::invalid_argument("polynomial division by zero");
  RatPoly q(num.size() >= den.size() ? num.size() - den.size() + 1 : 0, Rational(0));
  while (num.size() >= den.size() && !num.empty()) {
    Rational f = num.back() / den.back();
    std::size_t shift = num.size() - den.size();
    q[shift] = f;
    for (std::size_t i = 0; i < den.size(); ++i) num[shift + i] -= f * den[i];
    num.pop_back();
    trim(num);
  }
  trim(q);
  return {q, num};
}

inline RatPoly monic(RatPoly p) {
  Rational lead = p.back();
  for (auto& c : p) c /= lead;
  return p;
}

inline RatPoly gcd(RatPoly a, RatPoly b) {
  while (!b.empty()) {
    auto r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.empty() ? a : monic(a);
}

inline IntPolynomial primitive_part(const RatPoly& p) {
  Integer den = 1;
  for (const auto& c : p) den = lcm(den, denominator(c));
  std::vector<Integer> ints;
  for (const auto& c : p) ints.push_back(numerator(c) * (den / denominator(c)));
  Integer g = 0;
  for (const auto& c : ints) g = kronrec::gcd(g, c);
  for (auto& c : ints) c /= g;
  if (ints.back() < 0)
    for (auto& c : ints) c = -c;
  return IntPolynomial(std::move(ints));
}

}  // namespace detail

/// Square-free decomposition (Yun): A = c * prod F_i^{mult_i}, F_i primitive
/// and pairwise coprime.
inline std::vector<std::pair<IntPolynomial, int>> square_free_decomposition(const IntPolynomial& a) {
  using namespace detail;
  std::vector<std::pair<IntPolynomial, int>> out;
  if (a.degree() == 0) return out;
  RatPoly f = to_rat(a);
  RatPoly fp = derivative(f);
  RatPoly g = detail::gcd(f, fp);
  RatPoly b = divmod(f, g).first;
  RatPoly c = divmod(fp, g).first;
  RatPoly dd = sub(c, derivative(b));
  int i = 1;
  while (b.size() > 1) {
    RatPoly h = detail::gcd(b, dd);
    if (h.size() > 1) out.emplace_back(primitive_part(h), i);
    b = divmod(b, h).first;
    c = divmod(dd, h).first;
    dd = sub(c, derivative(b));
    ++i;
  }
  return out;
}

struct HighPrecisionRoot {
  ComplexReal value;
  Real radius;  // certified: the true root lies in the closed disk
  int multiplicity = 1;
};

struct Root {
  std::complex<double> value;
  int multiplicity = 1;
  double radius = 0;  // certified enclosure radius around value
};

struct ComplexRootSet {
  std::vector<Root> roots;
  std::size_t total_multiplicity() const {
    std::size_t n = 0;
    for (const auto& r : roots) n += static_cast<std::size_t>(r.multiplicity);
    return n;
  }
};

struct RootOptions {
  unsigned initial_digits = kDefaultDigits;
  unsigned max_digits = 1600;
  int max_iterations = 2000;
};

namespace detail {

inline ComplexReal horner(const std::vector<Real>& c, const ComplexReal& z) {
  ComplexReal acc(c.back());
  for (std::size_t i = c.size() - 1; i-- > 0;) acc = acc * z + ComplexReal(c[i]);
  return acc;
}

inline void horner_with_derivative(const std::vector<Real>& c, const ComplexReal& z, ComplexReal& p,
                                   ComplexReal& dp) {
  p = ComplexReal(c.back());
  dp = ComplexReal(Real(0));
  for (std::size_t i = c.size() - 1; i-- > 0;) {
    dp = dp * z + p;
    p = p * z + ComplexReal(c[i]);
  }
}

/// Aberth-Ehrlich iteration plus Weierstrass-correction inclusion radii for a
/// square-free integer polynomial at the current MPFR precision. Returns an
/// empty vector if the inclusion disks fail to separate.
inline std::vector<HighPrecisionRoot> aberth_square_free(const IntPolynomial& f, unsigned digits,
                                                         int max_iterations) {
  const std::size_t n = f.degree();
  std::vector<Real> c;
  for (const auto& a : f.coeffs()) c.emplace_back(a);
  std::vector<HighPrecisionRoot> out;
  if (n == 1) {
    Real r = Real(-c[0]) / c[1];
    using std::abs;
    Real rad = abs(r) * boost::multiprecision::pow(Real(10), -static_cast<int>(digits) + 3);
    out.push_back({ComplexReal(r), rad, 1});
    return out;
  }
  // Start on a circle whose radius is the geometric mean of root moduli,
  // scaled by the Cauchy bound for safety on spread-out spectra.
  using std::abs;
  Real cauchy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    Real q = abs(c[i] / c[n]);
    if (q > cauchy) cauchy = q;
  }
  cauchy += 1;
  Real geo = boost::multiprecision::pow(abs(c[0] / c[n]), Real(1) / Real(n));
  Real start_radius = (geo + cauchy) / 2;
  std::vector<ComplexReal> z(n);
  const Real two_pi = 2 * boost::math::constants::pi<Real>();
  for (std::size_t k = 0; k < n; ++k) {
    Real angle = two_pi * Real(k) / Real(n) + Real(0.4);
    z[k] = ComplexReal(start_radius * cos(angle), start_radius * sin(angle));
  }
  // Cubic convergence: once steps fall below 10^{-digits/3}, two more sweeps
  // reach working precision.
  const Real tol = boost::multiprecision::pow(Real(10), -static_cast<int>(digits / 3));
  int polish = -1;
  for (int it = 0; it < max_iterations && polish != 0; ++it) {
    if (polish > 0) --polish;
    Real max_step = 0;
    for (std::size_t k = 0; k < n; ++k) {
      ComplexReal p, dp;
      horner_with_derivative(c, z[k], p, dp);
      if (p.re == 0 && p.im == 0) continue;
      ComplexReal ratio = p / dp;
      ComplexReal sum;
      for (std::size_t j = 0; j < n; ++j)
        if (j != k) sum += ComplexReal(Real(1)) / (z[k] - z[j]);
      ComplexReal step = ratio / (ComplexReal(Real(1)) - ratio * sum);
      z[k] -= step;
      Real rel = abs(step) / (abs(z[k]) + 1);
      if (rel > max_step) max_step = rel;
    }
    if (polish < 0 && max_step < tol) polish = 2;
  }
  // Inclusion radii n * |W_k| with W_k = p(z_k) / (a_n prod_{j != k} (z_k - z_j)).
  const Real slack = boost::multiprecision::pow(Real(10), -static_cast<int>(digits) + 4);
  for (std::size_t k = 0; k < n; ++k) {
    ComplexReal den(c[n]);
    for (std::size_t j = 0; j < n; ++j)
      if (j != k) den *= z[k] - z[j];
    Real w = abs(horner(c, z[k]) / den);
    Real radius = Real(n) * w * (1 + slack) + slack * (abs(z[k]) + 1);
    out.push_back({z[k], radius, 1});
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (abs(out[i].value - out[j].value) <= out[i].radius + out[j].radius) return {};
  // Real coefficients: snap self-conjugate disks to the real axis and make
  // the remaining disks exact conjugate pairs.
  std::vector<int> partner(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    ComplexReal cz = conj(out[i].value);
    for (std::size_t j = 0; j < n; ++j)
      if (abs(cz - out[j].value) <= out[i].radius + out[j].radius) {
        if (partner[i] != -1) return {};  // ambiguous; refine further
        partner[i] = static_cast<int>(j);
      }
    if (partner[i] == -1) return {};
  }
  for (std::size_t i = 0; i < n; ++i) {
    auto j = static_cast<std::size_t>(partner[i]);
    if (j == i) {
      out[i].value.im = 0;
    } else if (out[i].value.im > 0) {
      Real r = out[i].radius > out[j].radius ? out[i].radius : out[j].radius;
      out[i].radius = r;
      out[j].radius = r;
      out[j].value = conj(out[i].value);
    }
  }
  return out;
}

}  // namespace detail

/// Certified roots with exact multiplicities, at (at least) the given
/// working precision. Escalates precision until every inclusion radius is
/// below target_radius. Must be called with the desired precision scope
/// active or relies on the digits in options.
inline std::vector<HighPrecisionRoot> roots_mp(const IntPolynomial& a, const Real& target_radius,
                                               const RootOptions& options = {}) {
  if (a.degree() < 1) throw domain_error("root finding needs degree >= 1");
  std::vector<HighPrecisionRoot> all;
  for (const auto& [factor, mult] : square_free_decomposition(a)) {
    std::vector<HighPrecisionRoot> found;
    for (unsigned digits = options.initial_digits; digits <= options.max_digits; digits *= 2) {
      PrecisionScope scope(digits);
      found = detail::aberth_square_free(factor, digits, options.max_iterations);
      bool ok = !found.empty() && std::all_of(found.begin(), found.end(), [&](const auto& r) {
        return r.radius <= target_radius;
      });
      if (ok) break;
      found.clear();
    }
    if (found.empty())
      throw numeric_failure("root isolation failed for factor " + factor.str() + " within " +
                            std::to_string(options.max_digits) + " digits");
    for (auto& r : found) {
      r.multiplicity = mult;
      all.push_back(std::move(r));
    }
  }
  return all;
}

/// Certified roots in double precision. The reported radius covers both the
/// inclusion disk and the rounding of the center to double.
inline ComplexRootSet roots(const IntPolynomial& a, double target_radius = 1e-12,
                            const RootOptions& options = {}) {
  if (!(target_radius > 0)) throw std::invalid_argument("target_radius must be positive");
  PrecisionScope scope(options.initial_digits);
  auto mp = roots_mp(a, Real(target_radius) / 4, options);
  ComplexRootSet out;
  for (const auto& r : mp) {
    std::complex<double> v = to_std(r.value);
    double rounding = (std::abs(v) + 1e-300) * 4.0 * std::numeric_limits<double>::epsilon();
    double radius = std::nextafter(to_double(r.radius), INFINITY) + rounding;
    if (radius > target_radius)
      throw numeric_failure("root radius " + std::to_string(radius) +
                            " exceeds target; use roots_mp for sub-double targets");
    out.roots.push_back({v, r.multiplicity, radius});
  }
  return out;
}

/// A real number with a certified half-width.
struct Enclosure {
  double value = 0;
  double error = 0;
  double lower() const { return value - error; }
  double upper() const { return value + error; }
};

struct RealInterval {
  Real lo;
  Real hi;
};

/// Midpoint/half-width double enclosure of an MPFR interval, widened to
/// absorb the conversion to double.
inline Enclosure to_enclosure(const RealInterval& iv) {
  Real mid = (iv.lo + iv.hi) / 2;
  Real half = (iv.hi - iv.lo) / 2;
  Enclosure e;
  e.value = to_double(mid);
  double conv = std::abs(to_double(Real(mid - Real(e.value))));
  e.error = std::nextafter(to_double(half) + conv + std::abs(e.value) * 1e-30, INFINITY);
  return e;
}

inline RealInterval reciprocal(const RealInterval& iv) {
  if (iv.lo <= 0) throw numeric_failure("reciprocal of an interval containing zero");
  return {Real(1 / iv.hi), Real(1 / iv.lo)};
}

/// Encloses |lead| * prod factor(|alpha_i|)^{mult_i}, given a function
/// mapping a modulus interval [lo, hi] to an enclosure [flo, fhi] of the
/// per-root factor over that interval.
inline RealInterval root_product_interval(
    const Integer& lead, const std::vector<HighPrecisionRoot>& rts,
    const std::function<std::pair<Real, Real>(const Real&, const Real&)>& factor) {
  RealInterval acc{Real(abs(lead)), Real(abs(lead))};
  for (const auto& r : rts) {
    Real mod = abs(r.value);
    Real a = mod - r.radius;
    if (a < 0) a = 0;
    Real b = mod + r.radius;
    auto [flo, fhi] = factor(a, b);
    for (int k = 0; k < r.multiplicity; ++k) {
      acc.lo *= flo;
      acc.hi *= fhi;
    }
  }
  return acc;
}

inline Enclosure root_product_enclosure(
    const Integer& lead, const std::vector<HighPrecisionRoot>& rts,
    const std::function<std::pair<Real, Real>(const Real&, const Real&)>& factor) {
  return to_enclosure(root_product_interval(lead, rts, factor));
}

enum class MahlerVariant { plain, half_scaled, double_scaled, conjugate };

inline std::string_view to_string(MahlerVariant v) {
  switch (v) {
    case MahlerVariant::plain: return "plain";
    case MahlerVariant::half_scaled: return "half_scaled";
    case MahlerVariant::double_scaled: return "double_scaled";
    case MahlerVariant::conjugate: return "conjugate";
  }
  return "plain";
}

inline MahlerVariant parse_mahler_variant(std::string_view s) {
  if (s == "plain") return MahlerVariant::plain;
  if (s == "half_scaled") return MahlerVariant::half_scaled;
  if (s == "double_scaled") return MahlerVariant::double_scaled;
  if (s == "conjugate") return MahlerVariant::conjugate;
  throw std::invalid_argument("unknown Mahler variant '" + std::string(s) + "'");
}

struct MahlerMeasure {
  double value = 0;
  double error = 0;
  MahlerVariant variant = MahlerVariant::plain;
  Enclosure enclosure() const { return {value, error}; }
};

/// Factor max{floor, x} over a modulus interval.
inline std::pair<Real, Real> max_with(const Real& floor, const Real& a, const Real& b) {
  return {a > floor ? a : floor, b > floor ? b : floor};
}

/// plain:         |a_d| prod max{1, |alpha|}           = M(A)
/// half_scaled:   |a_d| prod max{1/2, |alpha|}         = M(A(x/2))
/// double_scaled: |a_d| prod max{1, |alpha|/2}         = 2^{-d} M(A(2x))
/// conjugate:     M of the conjugate polynomial
inline MahlerMeasure mahler_measure(const IntPolynomial& a, MahlerVariant variant = MahlerVariant::plain,
                                    const RootOptions& options = {}) {
  require_nonzero_constant(a);
  if (a.degree() < 1) throw domain_error("Mahler measure needs degree >= 1");
  if (variant == MahlerVariant::conjugate) {
    auto m = mahler_measure(conjugate(a), MahlerVariant::plain, options);
    m.variant = MahlerVariant::conjugate;
    return m;
  }
  PrecisionScope scope(options.initial_digits);
  auto rts = roots_mp(a, Real("1e-30"), options);
  Enclosure e;
  switch (variant) {
    case MahlerVariant::plain:
      e = root_product_enclosure(a.leading(), rts, [](const Real& lo, const Real& hi) {
        return max_with(Real(1), lo, hi);
      });
      break;
    case MahlerVariant::half_scaled:
      e = root_product_enclosure(a.leading(), rts, [](const Real& lo, const Real& hi) {
        return max_with(Real(0.5), lo, hi);
      });
      break;
    default:
      e = root_product_enclosure(a.leading(), rts, [](const Real& lo, const Real& hi) {
        return max_with(Real(1), Real(lo / 2), Real(hi / 2));
      });
      break;
  }
  return {e.value, e.error, variant};
}

}  // namespace kronrec
