#pragma once

#include "hodge/subspace.hpp"

#include <random>

namespace hodge::testing {

inline Rational small_rational(std::mt19937_64& rng, int range = 3) {
  long num = static_cast<long>(rng() % (2 * range + 1)) - range;
  long den = 1 + static_cast<long>(rng() % 2);
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline Complex small_complex(std::mt19937_64& rng, int range = 3) {
  return {small_rational(rng, range), small_rational(rng, range)};
}

inline Vector random_vector(std::mt19937_64& rng, std::size_t n) {
  Vector v(n);
  for (auto& c : v) c = small_complex(rng);
  return v;
}

inline Subspace random_subspace(std::mt19937_64& rng, std::size_t n) {
  std::size_t k = rng() % (n + 1);
  std::vector<Vector> vs;
  for (std::size_t i = 0; i < k; ++i) vs.push_back(random_vector(rng, n));
  return Subspace::span(std::span<const Vector>(vs), n);
}

/// Random unitriangular recombination of the basis of s (spans the same space).
inline std::vector<Vector> random_basis_change(std::mt19937_64& rng, const Subspace& s) {
  auto b = s.basis();
  std::vector<Vector> out = b;
  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      if (j > i) out[i] = out[i] + small_complex(rng) * b[j];
  return out;
}

}  // namespace hodge::testing
