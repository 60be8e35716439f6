#pragma once

// Seeded generators for small algebras and for product embeddings built as
// subdirect representations A ↪ ∏ A/θ_i with ⋂θ_i = Δ, which are valid
// embeddings by construction.

#include <cstddef>
#include <utility>
#include <vector>

#include "rafilter/algebra.hpp"
#include "rafilter/congruence.hpp"
#include "rafilter/config.hpp"
#include "rafilter/embedding.hpp"
#include "rafilter/rng.hpp"

namespace rafilter {

/// Z_n with addition and zero.
inline FiniteAlgebra cyclic_group(std::size_t n) {
  return FiniteAlgebra::from_function(
      Signature{{"add", 2}, {"zero", 0}}, n, [n](std::size_t s, std::span<const element> x) {
        return s == 0 ? (x[0] + x[1]) % n : 0;
      });
}

/// The n-element chain 0 < 1 < ... under meet (min).
inline FiniteAlgebra chain_semilattice(std::size_t n) {
  return FiniteAlgebra::from_function(
      Signature{{"meet", 2}}, n,
      [](std::size_t, std::span<const element> x) { return std::min(x[0], x[1]); });
}

/// One binary operation "mul" with a uniformly random table.
inline FiniteAlgebra random_binary_algebra(Rng& rng, std::size_t n) {
  return FiniteAlgebra::from_function(
      Signature{{"mul", 2}}, n,
      [&](std::size_t, std::span<const element>) { return rng.below(n); });
}

/// One unary operation "f" given by a random self-map.
inline FiniteAlgebra random_unary_algebra(Rng& rng, std::size_t n) {
  return FiniteAlgebra::from_function(
      Signature{{"f", 1}}, n, [&](std::size_t, std::span<const element>) { return rng.below(n); });
}

/// A random binary algebra with a planted congruence: the universe is cut
/// into random blocks, a random operation is chosen on the blocks and each
/// product lands on a random element of the prescribed block.
inline FiniteAlgebra planted_binary_algebra(Rng& rng, std::size_t n) {
  std::size_t blocks = rng.between(1, n);
  std::vector<std::size_t> block_of(n);
  for (std::size_t x = 0; x < n; ++x) {
    block_of[x] = x < blocks ? x : rng.below(blocks);
  }
  std::vector<std::vector<element>> members(blocks);
  for (std::size_t x = 0; x < n; ++x) {
    members[block_of[x]].push_back(static_cast<element>(x));
  }
  std::vector<std::size_t> block_op(blocks * blocks);
  for (auto& b : block_op) {
    b = rng.below(blocks);
  }
  return FiniteAlgebra::from_function(
      Signature{{"mul", 2}}, n, [&](std::size_t, std::span<const element> x) {
        auto const& target = members[block_op[block_of[x[0]] * blocks + block_of[x[1]]]];
        return target[rng.below(target.size())];
      });
}

struct GeneratorOptions {
  std::size_t min_size = 2;
  std::size_t max_size = 6;
  std::size_t max_index = 6;
};

inline FiniteAlgebra random_algebra(Rng& rng, GeneratorOptions const& opts = {}) {
  std::size_t n = rng.between(opts.min_size, opts.max_size);
  switch (rng.below(5)) {
    case 0:
      return random_binary_algebra(rng, n);
    case 1:
      return cyclic_group(n);
    case 2:
      return random_unary_algebra(rng, n);
    case 3:
      return chain_semilattice(n);
    default:
      return planted_binary_algebra(rng, n);
  }
}

/// A ↪ ∏ A/θ_i for 1..max_index congruences meeting in the diagonal.  Half
/// of the time exactly one θ_i is forced to be the diagonal (the others
/// drawn from the rest of the lattice), which makes indecomposable
/// embeddings common; otherwise all θ_i are drawn from the whole lattice
/// and one is reset to the diagonal if their meet is not.
inline ProductEmbedding random_subdirect_embedding(Rng& rng, FiniteAlgebra const& a,
                                                   std::size_t max_index, Caps const& caps = {}) {
  auto lattice = all_congruences(a, caps);
  std::size_t m = rng.between(1, max_index);
  std::vector<std::size_t> picks(m);
  if (rng.chance(1, 2)) {
    for (auto& p : picks) {
      p = lattice.size() > 1 ? rng.between(1, lattice.size() - 1) : 0;
    }
    picks[rng.below(m)] = 0;
  } else {
    for (auto& p : picks) {
      p = rng.below(lattice.size());
    }
    Partition meet_all = Partition::coarsest(a.size());
    for (auto p : picks) {
      meet_all = meet(meet_all, lattice[p].partition());
    }
    if (!meet_all.is_finest()) {
      picks[rng.below(m)] = 0;
    }
  }
  std::vector<AlgebraMap> coords;
  for (auto p : picks) {
    coords.push_back(quotient(a, lattice[p], caps).map);
  }
  return ProductEmbedding(a, std::move(coords), caps);
}

inline ProductEmbedding random_embedding(Rng& rng, GeneratorOptions const& opts = {},
                                         Caps const& caps = {}) {
  auto a = random_algebra(rng, opts);
  return random_subdirect_embedding(rng, a, opts.max_index, caps);
}

}  // namespace rafilter
