#pragma once

#include "kronrec/poly_core.hpp"

#include <random>
#include <vector>

namespace kronrec::testing {

/// Random primitive polynomial with a_0 a_d != 0, degree in [1, max_degree]
/// and |a_i| <= max_coeff.
inline IntPolynomial random_primitive(std::mt19937_64& rng, std::size_t max_degree, long max_coeff) {
  std::uniform_int_distribution<std::size_t> deg(1, max_degree);
  std::uniform_int_distribution<long> coef(-max_coeff, max_coeff);
  for (;;) {
    std::vector<Integer> c(deg(rng) + 1);
    for (auto& x : c) x = coef(rng);
    if (c.front() == 0 || c.back() == 0) continue;
    IntPolynomial a(std::move(c));
    if (a.is_primitive()) return a;
  }
}

inline double binom(std::size_t n, std::size_t k) {
  double b = 1;
  for (std::size_t i = 1; i <= k; ++i) b = b * static_cast<double>(n - k + i) / static_cast<double>(i);
  return b;
}

inline std::vector<Rational> rats(std::initializer_list<long> xs) {
  return std::vector<Rational>(xs.begin(), xs.end());
}

}  // namespace kronrec::testing
