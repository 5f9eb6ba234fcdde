#pragma once

#include <random>
#include <vector>

#include "hybridlab/weyl_algebra.hpp"

namespace hybridlab::testing {

/// Small exact coefficient: (a/b) + (c/d) i with |a|,|c| <= 5 and b,d in 1..4.
inline ExactComplex random_coefficient(std::mt19937& rng, bool real_only = false) {
  std::uniform_int_distribution<int> num(-5, 5);
  std::uniform_int_distribution<int> den(1, 4);
  const Rational re(num(rng), den(rng));
  const Rational im = real_only ? Rational(0) : Rational(num(rng), den(rng));
  return {re, im};
}

/// Random polynomial of total degree <= max_degree in the given generators.
inline OperatorPolynomial random_polynomial(std::mt19937& rng, const std::vector<Generator>& gens,
                                            std::uint32_t max_degree, std::size_t max_terms = 4,
                                            bool real_only = false) {
  std::uniform_int_distribution<std::size_t> n_terms(1, max_terms);
  std::uniform_int_distribution<std::uint32_t> deg(0, max_degree);
  std::uniform_int_distribution<std::size_t> pick(0, gens.size() - 1);
  OperatorPolynomial out;
  const std::size_t n = n_terms(rng);
  for (std::size_t t = 0; t < n; ++t) {
    Monomial m;
    const std::uint32_t d = deg(rng);
    for (std::uint32_t j = 0; j < d; ++j) ++m.exponents[index(gens[pick(rng)])];
    out.add_term(m, random_coefficient(rng, real_only));
  }
  return out;
}

inline const std::vector<Generator> kSix(kAllGenerators.begin(), kAllGenerators.end());

}  // namespace hybridlab::testing
