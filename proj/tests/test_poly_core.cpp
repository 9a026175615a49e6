#include "kronrec/poly_core.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <complex>

using namespace kronrec;
using kronrec::testing::random_primitive;

namespace {

std::vector<std::complex<double>> sorted_values(const ComplexRootSet& rs) {
  std::vector<std::complex<double>> v;
  for (const auto& r : rs.roots)
    for (int k = 0; k < r.multiplicity; ++k) v.push_back(r.value);
  std::sort(v.begin(), v.end(), [](auto a, auto b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); });
  return v;
}

}  // namespace

TEST(Parse, WorkedExample) {
  auto a = parse_polynomial("3,-2,-9,-3,9");
  EXPECT_EQ(a.degree(), 4u);
  EXPECT_EQ(a.leading(), 9);
  EXPECT_EQ(a.constant(), 3);
  EXPECT_TRUE(a.is_primitive());
  EXPECT_FALSE(a.has_zero_constant());
}

TEST(Parse, FlagsAndStripping) {
  auto x = parse_polynomial("0,1");
  EXPECT_TRUE(x.has_zero_constant());
  EXPECT_FALSE(parse_polynomial("2,4").is_primitive());
  EXPECT_EQ(parse_polynomial(" -2 , 1 ,0,0").degree(), 1u);
}

TEST(Parse, Errors) {
  EXPECT_THROW(parse_polynomial(""), std::invalid_argument);
  EXPECT_THROW(parse_polynomial("1,x"), std::invalid_argument);
  EXPECT_THROW(parse_polynomial("1.5"), std::invalid_argument);
  EXPECT_THROW(parse_polynomial("0,0"), std::invalid_argument);
  EXPECT_THROW(parse_polynomial("1,,2"), std::invalid_argument);
  EXPECT_THROW(parse_polynomial("-"), std::invalid_argument);
}

TEST(Rationals, ParseAndPrint) {
  EXPECT_EQ(parse_rational("-6/4"), Rational(-3, 2));
  EXPECT_EQ(to_string(Rational(-3, 2)), "-3/2");
  EXPECT_EQ(to_string(Rational(4)), "4");
  EXPECT_EQ(parse_decimal("0.4"), Rational(2, 5));
  EXPECT_EQ(parse_decimal("-1.25e-1"), Rational(-1, 8));
  EXPECT_EQ(parse_decimal("3"), Rational(3));
  EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
  EXPECT_THROW(parse_decimal("0.4.1"), std::invalid_argument);
  EXPECT_EQ(to_rational(0.375), Rational(3, 8));
  EXPECT_EQ(to_rational(-3.0), Rational(-3));
}

TEST(Conjugate, Examples) {
  EXPECT_EQ(conjugate(IntPolynomial{-2, 1}), (IntPolynomial{1, -2}));
  EXPECT_EQ(conjugate(IntPolynomial{1, 3, 1}), (IntPolynomial{1, 3, 1}));
  EXPECT_EQ(conjugate(parse_polynomial("3,-2,-9,-3,9")), parse_polynomial("9,-3,-9,-2,3"));
  EXPECT_THROW(conjugate(IntPolynomial{0, 1}), domain_error);
}

TEST(Roots, Examples) {
  auto r = sorted_values(roots(IntPolynomial{-1, 0, 1}));
  ASSERT_EQ(r.size(), 2u);
  EXPECT_NEAR(r[0].real(), -1.0, 1e-12);
  EXPECT_NEAR(r[1].real(), 1.0, 1e-12);

  const double phi = (1 + std::sqrt(5.0)) / 2;
  auto g = sorted_values(roots(IntPolynomial{-1, -1, 1}));
  EXPECT_NEAR(g[0].real(), 1 - phi, 1e-12);
  EXPECT_NEAR(g[1].real(), phi, 1e-12);

  auto l = roots(IntPolynomial{-2, 1});
  ASSERT_EQ(l.roots.size(), 1u);
  EXPECT_NEAR(l.roots[0].value.real(), 2.0, 1e-12);
  for (const auto& x : l.roots) EXPECT_LE(x.radius, 1e-12);
}

TEST(Roots, ExactMultiplicities) {
  // (x-2)^2 (x+1) (x^2+1)^2
  auto a = IntPolynomial{-2, 1} * IntPolynomial{-2, 1} * IntPolynomial{1, 1} * IntPolynomial{1, 0, 1} *
           IntPolynomial{1, 0, 1};
  auto rs = roots(a);
  EXPECT_EQ(rs.total_multiplicity(), 7u);
  int twos = 0, units = 0;
  for (const auto& r : rs.roots) {
    if (std::abs(r.value - 2.0) < 1e-9) twos = r.multiplicity;
    if (std::abs(std::abs(r.value.imag()) - 1.0) < 1e-9) units += r.multiplicity;
  }
  EXPECT_EQ(twos, 2);
  EXPECT_EQ(units, 4);
}

TEST(Roots, RejectsConstant) { EXPECT_THROW(roots(IntPolynomial{5}), domain_error); }

TEST(RootsProperty, ReconstructionAndConjugatePairs) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    auto a = random_primitive(rng, 6, 9);
    auto rs = roots(a);
    EXPECT_EQ(rs.total_multiplicity(), a.degree());
    std::vector<std::complex<double>> poly{std::complex<double>(a.leading().convert_to<double>())};
    double with_radius = std::abs(a.leading().convert_to<double>()), without = with_radius;
    std::vector<std::complex<double>> nonreal;
    for (const auto& r : rs.roots)
      for (int k = 0; k < r.multiplicity; ++k) {
        std::vector<std::complex<double>> next(poly.size() + 1);
        for (std::size_t i = 0; i < poly.size(); ++i) {
          next[i + 1] += poly[i];
          next[i] -= poly[i] * r.value;
        }
        poly = next;
        with_radius *= 1 + std::abs(r.value) + r.radius;
        without *= 1 + std::abs(r.value);
        if (r.value.imag() != 0) nonreal.push_back(r.value);
      }
    const double bound = (with_radius - without) + with_radius * 1e-12;
    for (std::size_t i = 0; i <= a.degree(); ++i)
      EXPECT_LE(std::abs(poly[i] - a[i].convert_to<double>()), bound) << a.str();
    for (auto z : nonreal) {
      bool paired = std::any_of(nonreal.begin(), nonreal.end(), [&](auto w) { return w == std::conj(z); });
      EXPECT_TRUE(paired) << a.str();
    }
  }
}

TEST(Mahler, Examples) {
  auto m = mahler_measure(IntPolynomial{-2, 1});
  EXPECT_NEAR(m.value, 2.0, 1e-12);
  EXPECT_LE(m.error, 1e-12);
  EXPECT_NEAR(mahler_measure(IntPolynomial{1, 1, 1}).value, 1.0, 1e-12);
  EXPECT_NEAR(mahler_measure(IntPolynomial{-2, 1}, MahlerVariant::half_scaled).value, 2.0, 1e-12);
  EXPECT_NEAR(mahler_measure(IntPolynomial{-1, -1, 1}).value, (1 + std::sqrt(5.0)) / 2, 1e-12);
  EXPECT_NEAR(mahler_measure(IntPolynomial{-2, 1}, MahlerVariant::double_scaled).value, 1.0, 1e-12);
  EXPECT_NEAR(mahler_measure(IntPolynomial{-2, 1}, MahlerVariant::conjugate).value, 2.0, 1e-12);
  EXPECT_THROW(mahler_measure(IntPolynomial{0, 1}), domain_error);
  EXPECT_EQ(parse_mahler_variant("half_scaled"), MahlerVariant::half_scaled);
  EXPECT_THROW(parse_mahler_variant("other"), std::invalid_argument);
}

TEST(Mahler, Cyclotomic) {
  for (auto a : {IntPolynomial{1, 1}, IntPolynomial{1, 1, 1}, IntPolynomial{1, 0, 0, 0, 1}, IntPolynomial{1, -1, 1}})
    EXPECT_NEAR(mahler_measure(a).value, 1.0, 1e-10);
}

TEST(MahlerProperty, KroneckerConjugationMultiplicativityCoefficientBound) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    auto p = random_primitive(rng, 3, 9);
    auto q = random_primitive(rng, 3, 9);
    auto mp = mahler_measure(p), mq = mahler_measure(q), mpq = mahler_measure(p * q);
    EXPECT_GT(mp.value - mp.error, 0);
    EXPECT_GE(mp.value, 1 - mp.error);
    auto mc = mahler_measure(conjugate(p));
    EXPECT_LE(std::abs(mp.value - mc.value), mp.error + mc.error + 1e-14 * mp.value);
    EXPECT_NEAR(mpq.value, mp.value * mq.value, 1e-10 * mpq.value);
    for (std::size_t i = 0; i <= p.degree(); ++i)
      EXPECT_LE(std::abs(p[i].convert_to<double>()),
                kronrec::testing::binom(p.degree(), i) * (mp.value + mp.error) * (1 + 1e-12));
  }
}

TEST(SquareFree, Decomposition) {
  auto a = IntPolynomial{-2, 1} * IntPolynomial{-2, 1} * IntPolynomial{1, 1};
  auto parts = square_free_decomposition(a);
  int total = 0;
  for (const auto& [f, mult] : parts) total += static_cast<int>(f.degree()) * mult;
  EXPECT_EQ(total, 3);
}
