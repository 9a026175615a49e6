#include "kronrec/exact_linalg.hpp"
#include "kronrec/recurrence_matrices.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace kronrec;
using kronrec::testing::random_primitive;
using kronrec::testing::rats;

TEST(BandMatrix, Examples) {
  EXPECT_EQ(band_matrix(IntPolynomial{-2, 1}, 2), (IntMatrix{{-2, 1, 0}, {0, -2, 1}}));
  EXPECT_EQ(band_matrix(parse_polynomial("3,-2,-9,-3,9"), 1), (IntMatrix{{3, -2, -9, -3, 9}}));
  auto m = band_matrix(IntPolynomial{1, 1, 1}, 3);
  EXPECT_EQ(m.rows(), 3u);
  EXPECT_EQ(m.cols(), 5u);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 5; ++j) EXPECT_EQ(m(i, j), (j >= i && j <= i + 2) ? 1 : 0);
  EXPECT_THROW(band_matrix(IntPolynomial{-2, 1}, 0), std::invalid_argument);
  EXPECT_THROW(band_matrix(IntPolynomial{0, 1}, 2), domain_error);
}

TEST(TriMatrix, Examples) {
  EXPECT_EQ(tri_matrix(IntPolynomial{-2, 1}, 3), (IntMatrix{{1, 0, 0}, {-2, 1, 0}, {0, -2, 1}}));
  auto a = IntPolynomial{3, 5, 7};
  auto t = tri_matrix(a, 2);
  EXPECT_EQ(t, (IntMatrix{{7, 0}, {5, 7}}));
}

TEST(TriMatrix, EmbedsBandRows) {
  auto a = parse_polynomial("3,-2,-9,-3,9");
  const std::size_t m = 9, d = a.degree();
  auto t = tri_matrix(a, m);
  auto b = band_matrix(a, m - d);
  EXPECT_EQ(t.block(d, m, 0, m), b);
}

TEST(TriMatrix, InverseOfLinearFactor) {
  for (Rational gamma : {Rational(1, 3), Rational(-2, 5), Rational(4)}) {
    const std::size_t m = 5;
    auto t = tri_matrix<Rational>(std::vector<Rational>{-gamma, Rational(1)}, m);
    RatMatrix inv(m, m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j <= i; ++j) inv(i, j) = pow(gamma, static_cast<long>(i - j));
    EXPECT_EQ(t * inv, RatMatrix::identity(m));
  }
}

TEST(RecurrenceExtend, Examples) {
  EXPECT_EQ(recurrence_extend(IntPolynomial{-2, 1}, rats({1}), 4), rats({1, 2, 4, 8}));
  EXPECT_EQ(recurrence_extend(IntPolynomial{-3, 2}, rats({1}), 3),
            (std::vector<Rational>{1, Rational(3, 2), Rational(9, 4)}));
  auto v = recurrence_extend(parse_polynomial("3,-2,-9,-3,9"), rats({1, 0, 0, 0}), 5);
  EXPECT_EQ(v.back(), Rational(-1, 3));
  EXPECT_THROW(recurrence_extend(IntPolynomial{-2, 1}, rats({1}), 0), std::invalid_argument);
  EXPECT_THROW(recurrence_extend(IntPolynomial{-2, 1}, rats({1, 2}), 4), std::invalid_argument);
}

TEST(Factorization, Examples) {
  IntPolynomial a{6, -5, 1};
  EXPECT_TRUE(verify_factorization(a, rats({-2, 1}), rats({-3, 1}), 3));
  EXPECT_TRUE(verify_factorization(a, rats({1}), rats({6, -5, 1}), 2));
  EXPECT_THROW(verify_factorization(IntPolynomial{0, 0, 1}, rats({0, 1}), rats({0, 1}), 2), domain_error);
  EXPECT_THROW(verify_factorization(a, rats({-2, 1}), rats({-4, 1}), 2), std::invalid_argument);
}

TEST(FactorizationProperty, RandomRationalSplits) {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 20; ++t) {
    auto p = random_primitive(rng, 3, 5), q = random_primitive(rng, 2, 5);
    auto a = p * q;
    std::vector<Rational> b(p.coeffs().begin(), p.coeffs().end()), c(q.coeffs().begin(), q.coeffs().end());
    // rescale by a rational unit to leave Z
    for (auto& x : b) x *= Rational(3, 7);
    for (auto& x : c) x *= Rational(7, 3);
    for (std::size_t ell = 1; ell <= 4; ++ell) EXPECT_TRUE(verify_factorization(a, b, c, ell));
  }
}

TEST(RecurrenceProperty, PowerSeriesWindow) {
  std::mt19937_64 rng(43);
  std::uniform_int_distribution<long> coef(-9, 9);
  for (int t = 0; t < 30; ++t) {
    auto a = random_primitive(rng, 4, 9);
    const std::size_t d = a.degree(), ell = 1 + rng() % 5;
    std::vector<Integer> f(d + ell);
    for (auto& x : f) x = coef(rng);
    std::vector<Integer> prod(a.degree() + f.size(), Integer(0));
    for (std::size_t i = 0; i <= d; ++i)
      for (std::size_t j = 0; j < f.size(); ++j) prod[i + j] += a[i] * f[j];
    std::vector<Integer> rev(f.rbegin(), f.rend());
    auto image = band_matrix(a, ell) * std::span<const Integer>(rev);
    for (std::size_t i = 0; i < ell; ++i) EXPECT_EQ(image[i], prod[d + ell - 1 - i]);
  }
}

TEST(RecurrenceProperty, KernelRowsAreRecurrences) {
  std::mt19937_64 rng(47);
  for (int t = 0; t < 20; ++t) {
    auto a = random_primitive(rng, 3, 9);
    const std::size_t d = a.degree(), m = d + 1 + rng() % 4;
    auto k = integer_kernel(band_matrix(a, m - d));
    EXPECT_EQ(k.rows(), d);
    for (std::size_t i = 0; i < k.rows(); ++i) {
      std::vector<Rational> row(k.row(i).begin(), k.row(i).end());
      EXPECT_TRUE(is_recurrence(a, row));
      std::vector<Rational> init(row.begin(), row.begin() + static_cast<long>(d));
      EXPECT_EQ(recurrence_extend(a, init, m), row);
    }
  }
}
