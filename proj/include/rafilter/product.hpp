#pragma once

#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rafilter/algebra.hpp"
#include "rafilter/config.hpp"
#include "rafilter/error.hpp"
#include "rafilter/subset.hpp"

namespace rafilter {

struct DirectProduct {
  FiniteAlgebra algebra;
  std::vector<AlgebraMap> projections;
};

inline std::vector<FiniteAlgebra> select_factors(std::span<const FiniteAlgebra> family,
                                                 IndexSubset const& j) {
  if (j.ground_size() != family.size()) {
    throw input_error("index subset over " + std::to_string(j.ground_size()) +
                      " indices for a family of " + std::to_string(family.size()));
  }
  std::vector<FiniteAlgebra> out;
  for (auto i : j.indices()) {
    out.push_back(family[i]);
  }
  return out;
}

/// Product algebra plus the coordinate projections.  The empty family gives
/// the one-element algebra of `signature`.
inline DirectProduct direct_product(Signature const& signature,
                                    std::vector<FiniteAlgebra> family, Caps const& caps = {}) {
  auto prod = FiniteAlgebra::product(signature, std::move(family), caps);
  std::vector<AlgebraMap> projections;
  auto const& factors = prod.factors();
  for (std::size_t k = 0; k < factors.size(); ++k) {
    std::vector<element> values(prod.size());
    for (std::size_t x = 0; x < prod.size(); ++x) {
      values[x] = prod.coordinates(static_cast<element>(x))[k];
    }
    projections.emplace_back(prod, factors[k], std::move(values));
  }
  return {prod, std::move(projections)};
}

inline DirectProduct direct_product(std::vector<FiniteAlgebra> family, Caps const& caps = {}) {
  if (family.empty()) {
    throw input_error("direct_product: pass the signature for an empty family");
  }
  Signature sig = family.front().signature();
  return direct_product(sig, std::move(family), caps);
}

/// Image of product element x under the projection onto the coordinates in
/// j; `target` is the product of the selected factors.
inline element project_element(FiniteAlgebra const& product, FiniteAlgebra const& target,
                               IndexSubset const& j, element x) {
  auto coords = product.coordinates(x);
  std::vector<element> kept;
  kept.reserve(j.size());
  for (auto i : j.indices()) {
    kept.push_back(coords[i]);
  }
  return target.encode(kept);
}

/// The projection ∏_{i∈I} B_i → ∏_{i∈J} B_i forgetting coordinates outside J.
inline AlgebraMap subproduct_projection(Signature const& signature,
                                        std::span<const FiniteAlgebra> family,
                                        IndexSubset const& j, Caps const& caps = {}) {
  auto source = FiniteAlgebra::product(signature, {family.begin(), family.end()}, caps);
  auto target = FiniteAlgebra::product(signature, select_factors(family, j), caps);
  std::vector<element> values(source.size());
  for (std::size_t x = 0; x < source.size(); ++x) {
    values[x] = project_element(source, target, j, static_cast<element>(x));
  }
  return AlgebraMap(std::move(source), std::move(target), std::move(values));
}

/// (∏_I B_i) × (∏_J B_i) ≅ ∏_{I⊔J} B_i with I's indices listed first.
inline AlgebraMap disjoint_union_iso(Signature const& signature,
                                     std::span<const FiniteAlgebra> family_i,
                                     std::span<const FiniteAlgebra> family_j,
                                     Caps const& caps = {}) {
  auto left = FiniteAlgebra::product(signature, {family_i.begin(), family_i.end()}, caps);
  auto right = FiniteAlgebra::product(signature, {family_j.begin(), family_j.end()}, caps);
  auto pair = FiniteAlgebra::product(signature, {left, right}, caps);
  std::vector<FiniteAlgebra> joined(family_i.begin(), family_i.end());
  joined.insert(joined.end(), family_j.begin(), family_j.end());
  auto target = FiniteAlgebra::product(signature, std::move(joined), caps);

  std::vector<element> values(pair.size());
  for (std::size_t x = 0; x < pair.size(); ++x) {
    auto halves = pair.coordinates(static_cast<element>(x));
    auto coords = left.coordinates(halves[0]);
    auto tail = right.coordinates(halves[1]);
    coords.insert(coords.end(), tail.begin(), tail.end());
    values[x] = target.encode(coords);
  }
  return AlgebraMap(std::move(pair), std::move(target), std::move(values));
}

/// The reindexing isomorphism ∏_k B_{order[k]} → ∏_i B_i, for a
/// permutation `order` of the family's indices.
inline AlgebraMap coordinate_permutation(Signature const& signature,
                                         std::span<const FiniteAlgebra> family,
                                         std::span<const std::size_t> order,
                                         Caps const& caps = {}) {
  std::vector<bool> seen(family.size(), false);
  if (order.size() != family.size()) {
    throw input_error("coordinate_permutation: order has the wrong length");
  }
  std::vector<FiniteAlgebra> permuted;
  for (auto i : order) {
    if (i >= family.size() || seen[i]) {
      throw input_error("coordinate_permutation: order is not a permutation");
    }
    seen[i] = true;
    permuted.push_back(family[i]);
  }
  auto source = FiniteAlgebra::product(signature, std::move(permuted), caps);
  auto target = FiniteAlgebra::product(signature, {family.begin(), family.end()}, caps);
  std::vector<element> values(source.size());
  std::vector<element> coords(family.size());
  for (std::size_t x = 0; x < source.size(); ++x) {
    auto c = source.coordinates(static_cast<element>(x));
    for (std::size_t k = 0; k < order.size(); ++k) {
      coords[order[k]] = c[k];
    }
    values[x] = target.encode(coords);
  }
  return AlgebraMap(std::move(source), std::move(target), std::move(values));
}

/// x ↦ (x, x) into a × a.
inline AlgebraMap diagonal_map(FiniteAlgebra const& a, Caps const& caps = {}) {
  auto square = FiniteAlgebra::product(a.signature(), {a, a}, caps);
  std::vector<element> values(a.size());
  for (element x = 0; x < a.size(); ++x) {
    values[x] = static_cast<element>(x * a.size() + x);
  }
  return AlgebraMap(a, std::move(square), std::move(values));
}

/// x ↦ (first(x), second(x)).
inline AlgebraMap pairing(AlgebraMap const& first, AlgebraMap const& second,
                          Caps const& caps = {}) {
  if (first.domain().size() != second.domain().size()) {
    throw input_error("pairing: maps have different domains");
  }
  auto target = FiniteAlgebra::product(first.codomain().signature(),
                                       {first.codomain(), second.codomain()}, caps);
  std::vector<element> values(first.domain().size());
  for (element x = 0; x < values.size(); ++x) {
    values[x] = static_cast<element>(first(x) * second.codomain().size() + second(x));
  }
  return AlgebraMap(first.domain(), std::move(target), std::move(values));
}

/// (x, y) ↦ (first(x), second(y)).
inline AlgebraMap product_map(AlgebraMap const& first, AlgebraMap const& second,
                              Caps const& caps = {}) {
  auto const& sig = first.domain().signature();
  auto source = FiniteAlgebra::product(sig, {first.domain(), second.domain()}, caps);
  auto target = FiniteAlgebra::product(sig, {first.codomain(), second.codomain()}, caps);
  std::vector<element> values(source.size());
  for (std::size_t p = 0; p < source.size(); ++p) {
    auto c = source.coordinates(static_cast<element>(p));
    values[p] = static_cast<element>(first(c[0]) * second.codomain().size() + second(c[1]));
  }
  return AlgebraMap(std::move(source), std::move(target), std::move(values));
}

}  // namespace rafilter
