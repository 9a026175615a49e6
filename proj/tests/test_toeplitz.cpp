#include "kronrec/toeplitz.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace kronrec;
using kronrec::testing::random_primitive;
using kronrec::testing::rats;

namespace {

LaurentSymbol tridiagonal() { return LaurentSymbol(rats({-2, 5, -2}), 1); }

// D_n of the tridiagonal symbol by the three-term recurrence.
Rational tridiagonal_oracle(std::size_t n) {
  Rational prev = 1, cur = 5;
  for (std::size_t k = 1; k <= n; ++k) {
    Rational next = 5 * cur - 4 * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

std::vector<std::vector<Rational>> rows_of(const RatMatrix& m) {
  std::vector<std::vector<Rational>> out;
  for (std::size_t i = 0; i < m.rows(); ++i) out.push_back(m.row_vector(i));
  return out;
}

}  // namespace

TEST(Symbol, Construction) {
  auto s = symbol_of(IntPolynomial{-2, 1});
  EXPECT_EQ(s.r(), 1u);
  EXPECT_EQ(s.s(), 1u);
  EXPECT_EQ(s[-1], -2);
  EXPECT_EQ(s[0], 5);
  EXPECT_EQ(s[1], -2);
  EXPECT_EQ(s[2], 0);
  EXPECT_TRUE(s.is_hermitian());
  EXPECT_EQ(s.str(), "-2,5,-2");
  EXPECT_THROW(LaurentSymbol(rats({0, 1}), 1), domain_error);
  EXPECT_FALSE(LaurentSymbol(rats({1, 2, 3}), 1).is_hermitian());
}

TEST(ToeplitzDirect, Examples) {
  EXPECT_EQ(toeplitz_det_direct(tridiagonal(), 1), 21);
  EXPECT_EQ(toeplitz_det_direct(tridiagonal(), 2), 85);
  for (std::size_t n = 0; n < 6; ++n) {
    EXPECT_EQ(toeplitz_det_direct(LaurentSymbol(rats({1}), 0), n), 1);
    EXPECT_EQ(toeplitz_det_direct(tridiagonal(), n), tridiagonal_oracle(n));
  }
  // index convention: entry (j, k) = c_{k-j}
  auto t = toeplitz_matrix(LaurentSymbol(rats({7, 1, 3, 5}), 1), 2);
  EXPECT_EQ(t(0, 1), 3);
  EXPECT_EQ(t(1, 0), 7);
  EXPECT_EQ(t(0, 2), 5);
}

TEST(Trench, Examples) {
  auto t2 = trench_det(tridiagonal(), 2);
  ASSERT_TRUE(t2.exact.has_value());
  EXPECT_EQ(*t2.exact, 21);
  EXPECT_EQ(trench_det(tridiagonal(), 3).exact.value(), 85);
  EXPECT_EQ(t2.matrix_size, 2u);
  EXPECT_THROW(trench_det(tridiagonal(), 0), std::invalid_argument);
}

TEST(Trench, RepeatedRoots) {
  auto sym = symbol_of(IntPolynomial{-2, 1} * IntPolynomial{-2, 1});
  auto t = trench_det(sym, 4);
  const double direct = to_double(toeplitz_det_direct(sym, 3));
  EXPECT_NEAR(t.value, direct, 1e-8 * std::abs(direct));
  for (const auto& r : t.roots) EXPECT_EQ(r.multiplicity, 2);
}

TEST(Trench, IrrationalAndComplexRoots) {
  for (auto b : {IntPolynomial{-1, -1, 1}, IntPolynomial{2, 1, 1}, IntPolynomial{3, 1, 0, 2}, IntPolynomial{1, 0, 1}}) {
    auto sym = symbol_of(b);
    for (std::size_t n = 1; n <= 10; ++n) {
      auto t = trench_det(sym, n);
      const double direct = to_double(toeplitz_det_direct(sym, n - 1));
      EXPECT_NEAR(t.value, direct, 1e-8 * std::max(1.0, std::abs(direct))) << b.str() << " n=" << n;
      EXPECT_LE(t.error, 1e-8 * std::max(1.0, std::abs(direct)));
    }
  }
}

TEST(Trench, NonHermitianSymbol) {
  LaurentSymbol c(rats({3, -7, 2, 1}), 2);  // r = 2, s = 1
  for (std::size_t n = 1; n <= 8; ++n) {
    auto t = trench_det(c, n);
    const double direct = to_double(toeplitz_det_direct(c, n - 1));
    EXPECT_NEAR(t.value, direct, 1e-8 * std::max(1.0, std::abs(direct))) << n;
  }
}

TEST(Gram, Examples) {
  std::vector<std::vector<Rational>> e{rats({1, 0, 0}), rats({0, 1, 0})};
  EXPECT_EQ(gram_det(e).determinant, 1);
  std::vector<std::vector<Rational>> one{rats({1, 2, 4})};
  EXPECT_EQ(gram_det(one).determinant, 21);
  auto rows = band_rows(rats({-2, 1}), 2);
  EXPECT_EQ(gram_det(rows).determinant, 21);
  EXPECT_EQ(gram_det(rows).determinant, toeplitz_det_direct(symbol_of(IntPolynomial{-2, 1}), 1));
  std::vector<std::vector<Rational>> bad{rats({1, 2}), rats({1})};
  EXPECT_THROW(gram_det(bad), std::invalid_argument);
}

TEST(GramProperty, NonnegativeAndBridge) {
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<long> d(-5, 5);
  for (int t = 0; t < 30; ++t) {
    std::vector<std::vector<Rational>> vs(1 + rng() % 4, std::vector<Rational>(4));
    for (auto& v : vs)
      for (auto& x : v) x = Rational(d(rng), 1 + rng() % 3);
    EXPECT_GE(gram_det(vs).determinant, 0);
  }
  for (int t = 0; t < 10; ++t) {
    auto b = random_primitive(rng, 3, 6);
    std::vector<Rational> bq(b.coeffs().begin(), b.coeffs().end());
    for (std::size_t ell = 1; ell <= 6; ++ell)
      EXPECT_EQ(gram_det(band_rows(bq, ell)).determinant, toeplitz_det_direct(symbol_of(b), ell - 1));
  }
}

TEST(Lyons, Examples) {
  IntPolynomial a{-2, 1};
  std::vector<std::size_t> none, one{1};
  EXPECT_EQ(lyons_ratio(a, none, 3), 1);
  EXPECT_EQ(lyons_ratio(a, one, 1), Rational(1, 5));
  EXPECT_EQ(lyons_ratio(a, one, 2), Rational(1, 21));
  std::vector<std::size_t> out_of_range{2};
  EXPECT_THROW(lyons_ratio(a, out_of_range, 2), std::invalid_argument);
}

TEST(Lyons, NormalisesByLeadingCoefficient) {
  std::vector<std::size_t> one{1};
  // B = A / a_d, so A and 3A give the same ratio.
  EXPECT_EQ(lyons_ratio(IntPolynomial{-1, 2}, one, 4), lyons_ratio(IntPolynomial{-3, 6}, one, 4));
}

TEST(Biorthonormal, Examples) {
  auto id = rows_of(RatMatrix::identity(3));
  EXPECT_TRUE(biorthonormal_check(id, id).holds());

  RatMatrix t = tri_matrix(IntPolynomial{-2, 1}, 3).cast<Rational>();
  auto v = rows_of(inverse(t).transpose());
  auto rep = biorthonormal_check(rows_of(t), v);
  EXPECT_TRUE(rep.gram_product_identity);
  EXPECT_TRUE(rep.holds());

  RatMatrix u{{1, 2, 0}, {0, 1, 3}, {1, 0, 1}};
  ASSERT_EQ(abs(determinant(u)), 7);
  RatMatrix uni{{1, 2, 0}, {0, 1, 3}, {0, 0, 1}};
  auto uni_rep = biorthonormal_check(rows_of(uni), rows_of(inverse(uni).transpose()));
  EXPECT_EQ(uni_rep.complementary_minors.size(), 2u);
  EXPECT_TRUE(uni_rep.holds());
  // Gram product identity holds for any dual pair; the complementary minors
  // need unit covolume, det G(u) = 1.
  auto scaled = biorthonormal_check(rows_of(u), rows_of(inverse(u).transpose()));
  EXPECT_TRUE(scaled.gram_product_identity);
  EXPECT_FALSE(scaled.holds());
  EXPECT_THROW(biorthonormal_check(rows_of(u), rows_of(u)), domain_error);
}

TEST(Growth, ClosedFormForLinearSymbol) {
  auto g = toeplitz_growth(IntPolynomial{-2, 1}, 20);
  for (std::size_t ell = 0; ell <= 20; ++ell)
    EXPECT_EQ(g[ell].det, (pow(Rational(4), static_cast<long>(ell + 2)) - 1) / 3);
  EXPECT_LT(std::abs(g[20].ratio - 4), 1e-6);
}
