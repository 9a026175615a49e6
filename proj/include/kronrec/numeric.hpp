#pragma once

// Scalar types shared by every kronrec module: GMP-backed integers and
// rationals for the exact paths, MPFR reals and a small complex type for the
// extended-precision numeric paths.

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/miller_rabin.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace kronrec {

using Integer = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;
using Real = boost::multiprecision::mpfr_float;

/// Raised when an input violates a mathematical precondition of an
/// operation (non-primitive polynomial, a_0 = 0, singular matrix, ...).
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when a numeric procedure cannot certify its result within the
/// configured precision budget.
class numeric_failure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Integer numerator(const Rational& q) {
  return boost::multiprecision::numerator(q);
}
inline Integer denominator(const Rational& q) {
  return boost::multiprecision::denominator(q);
}

inline Integer abs(const Integer& x) { return x < 0 ? Integer(-x) : x; }
inline Rational abs(const Rational& x) { return x < 0 ? Rational(-x) : x; }

inline Integer gcd(const Integer& a, const Integer& b) {
  return boost::multiprecision::gcd(a, b);
}
inline Integer lcm(const Integer& a, const Integer& b) {
  if (a == 0 || b == 0) return 0;
  return abs(Integer(a / gcd(a, b) * b));
}

inline Integer pow(const Integer& base, unsigned exponent) {
  return boost::multiprecision::pow(base, exponent);
}

inline Rational pow(const Rational& base, long exponent) {
  Rational result = 1;
  Rational b = exponent < 0 ? Rational(1 / base) : base;
  unsigned long e = exponent < 0 ? static_cast<unsigned long>(-exponent)
                                 : static_cast<unsigned long>(exponent);
  while (e) {
    if (e & 1u) result *= b;
    b *= b;
    e >>= 1u;
  }
  return result;
}

/// "p/q" for non-integers, "p" otherwise. Stable across runs.
inline std::string to_string(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

inline std::string to_string(const Integer& z) { return z.str(); }

/// Parses "p", "-p" or "p/q" (base 10, optional leading minus).
inline Rational parse_rational(std::string_view text) {
  auto is_int = [](std::string_view s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9') return false;
    return true;
  };
  auto strip_plus = [](std::string_view s) {
    return std::string(s[0] == '+' ? s.substr(1) : s);
  };
  auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    if (!is_int(text))
      throw std::invalid_argument("not an integer: '" + std::string(text) + "'");
    return Rational(Integer(strip_plus(text)));
  }
  auto num = text.substr(0, slash);
  auto den = text.substr(slash + 1);
  if (!is_int(num) || !is_int(den))
    throw std::invalid_argument("not a rational: '" + std::string(text) + "'");
  Integer d(strip_plus(den));
  if (d == 0) throw std::invalid_argument("zero denominator: '" + std::string(text) + "'");
  return Rational(Integer(strip_plus(num)), d);
}

/// Exact value of a decimal literal such as "0.4", "-1.25e-3" or "2/5".
inline Rational parse_decimal(std::string_view text) {
  if (text.find('/') != std::string_view::npos) return parse_rational(text);
  std::string_view mant = text;
  long exp10 = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    mant = text.substr(0, e);
    Rational ex = parse_rational(text.substr(e + 1));
    exp10 = numerator(ex).convert_to<long>();
  }
  std::string digits;
  bool neg = false, dot = false, any = false;
  long frac = 0;
  for (std::size_t i = 0; i < mant.size(); ++i) {
    char c = mant[i];
    if (i == 0 && (c == '-' || c == '+')) {
      neg = c == '-';
    } else if (c == '.' && !dot) {
      dot = true;
    } else if (c >= '0' && c <= '9') {
      digits += c;
      any = true;
      if (dot) ++frac;
    } else {
      throw std::invalid_argument("not a decimal number: '" + std::string(text) + "'");
    }
  }
  if (!any) throw std::invalid_argument("not a decimal number: '" + std::string(text) + "'");
  Rational r{Integer(digits)};
  r *= pow(Rational(10), exp10 - frac);
  return neg ? Rational(-r) : r;
}

/// Exact rational value of a finite double.
inline Rational to_rational(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("non-finite value");
  int exponent = 0;
  double mantissa = std::frexp(x, &exponent);
  // 53 significant bits fit in int64 after scaling.
  auto scaled = static_cast<std::int64_t>(std::ldexp(mantissa, 53));
  Rational r{Integer(scaled)};
  exponent -= 53;
  if (exponent > 0) r *= pow(Integer(2), static_cast<unsigned>(exponent));
  if (exponent < 0) r /= pow(Integer(2), static_cast<unsigned>(-exponent));
  return r;
}

inline double to_double(const Rational& q) { return q.convert_to<double>(); }
inline double to_double(const Integer& z) { return z.convert_to<double>(); }
inline double to_double(const Real& x) { return x.convert_to<double>(); }

/// Miller-Rabin after trial division; deterministic for the sizes used here.
inline bool is_prime(const Integer& n) {
  if (n < 2) return false;
  static constexpr int small[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (int p : small) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  return boost::multiprecision::miller_rabin_test(n, 25);
}

/// RAII guard for the default MPFR precision (decimal digits).
class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned digits)
      : saved_(Real::default_precision()) {
    Real::default_precision(digits);
  }
  ~PrecisionScope() { Real::default_precision(saved_); }
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  unsigned saved_;
};

/// Minimal complex number over an arbitrary real field. std::complex is
/// only specified for the builtin floating types.
template <class R>
struct Complex {
  R re{0};
  R im{0};

  Complex() = default;
  Complex(R r) : re(std::move(r)), im(0) {}  // NOLINT(google-explicit-constructor)
  Complex(R r, R i) : re(std::move(r)), im(std::move(i)) {}

  friend Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
  friend Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }
  friend Complex operator-(const Complex& a) { return {-a.re, -a.im}; }
  friend Complex operator*(const Complex& a, const Complex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend Complex operator/(const Complex& a, const Complex& b) {
    R den = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / den, (a.im * b.re - a.re * b.im) / den};
  }
  Complex& operator+=(const Complex& o) { return *this = *this + o; }
  Complex& operator-=(const Complex& o) { return *this = *this - o; }
  Complex& operator*=(const Complex& o) { return *this = *this * o; }
  Complex& operator/=(const Complex& o) { return *this = *this / o; }

  friend R norm(const Complex& z) { return z.re * z.re + z.im * z.im; }
  friend R abs(const Complex& z) {
    using std::sqrt;
    return sqrt(norm(z));
  }
  friend Complex conj(const Complex& z) { return {z.re, -z.im}; }
};

using ComplexReal = Complex<Real>;

inline std::complex<double> to_std(const ComplexReal& z) {
  return {to_double(z.re), to_double(z.im)};
}

/// Default working precision (decimal digits) for the extended-precision
/// numeric paths; the CLI overrides it through KRONREC_PRECISION.
inline constexpr unsigned kDefaultDigits = 50;

}  // namespace kronrec
