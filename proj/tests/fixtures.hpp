#pragma once

#include <vector>

#include "rafilter/rafilter.hpp"

namespace fx {

using namespace rafilter;

inline FiniteAlgebra z(std::size_t n) { return cyclic_group(n); }

inline FiniteAlgebra one_point() { return trivial_algebra(z(2).signature()); }

/// Z2 x Z2 tabulated, with elements in mixed-radix order.
inline FiniteAlgebra klein() { return FiniteAlgebra::product(z(2).signature(), {z(2), z(2)}).tabulate(); }

inline FiniteAlgebra semilattice(std::size_t n) { return chain_semilattice(n); }

inline AlgebraMap mod_map(std::size_t from, std::size_t to) {
  std::vector<element> v(from);
  for (element x = 0; x < from; ++x) v[x] = x % to;
  return AlgebraMap(z(from), z(to), v);
}

/// Z2 -> Z2 x Z2, x -> (x, x).
inline ProductEmbedding diagonal_z2() {
  return ProductEmbedding(z(2), {identity_map(z(2)), identity_map(z(2))});
}

/// Z2 -> Z2 x T with f_0 = id and T the one-element algebra.
inline ProductEmbedding z2_times_point() {
  return ProductEmbedding(z(2), {identity_map(z(2)), constant_map(z(2), one_point(), 0)});
}

/// Z6 -> Z2 x Z3 by the two reductions.
inline ProductEmbedding z6_crt() {
  return ProductEmbedding(z(6), {mod_map(6, 2), mod_map(6, 3)});
}

}  // namespace fx
