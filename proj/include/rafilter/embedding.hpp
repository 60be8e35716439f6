#pragma once

// Embeddings f : A ↪ ∏_{i∈I} B_i given by their coordinate homomorphisms,
// and the family U(f) of index sets J through whose projection f still
// factors injectively.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rafilter/algebra.hpp"
#include "rafilter/congruence.hpp"
#include "rafilter/config.hpp"
#include "rafilter/error.hpp"
#include "rafilter/product.hpp"
#include "rafilter/subset.hpp"

namespace rafilter {

/// First reason a list of coordinate maps fails to be an embedding.
struct EmbeddingViolation {
  std::string message;
  std::optional<std::size_t> coordinate;
  std::optional<std::pair<element, element>> colliding;
};

inline std::string format_tuple(std::span<const element> args) {
  std::string out = "(";
  for (std::size_t j = 0; j < args.size(); ++j) {
    out += (j ? "," : "") + std::to_string(args[j]);
  }
  return out + ")";
}

inline std::optional<EmbeddingViolation> find_embedding_violation(
    FiniteAlgebra const& domain, std::vector<AlgebraMap> const& coords, Caps const& caps = {}) {
  std::size_t limit = std::min(caps.max_index_set, hard_index_set_limit);
  if (coords.empty()) {
    return EmbeddingViolation{"embedding: the index set must be nonempty", {}, {}};
  }
  if (coords.size() > limit) {
    return EmbeddingViolation{"embedding: " + std::to_string(coords.size()) +
                                  " coordinates exceed the index-set cap " +
                                  std::to_string(limit),
                              {}, {}};
  }
  for (std::size_t i = 0; i < coords.size(); ++i) {
    auto const& m = coords[i];
    if (!(m.domain() == domain)) {
      return EmbeddingViolation{
          "maps[" + std::to_string(i) + "]: domain is not the embedded algebra", i, {}};
    }
    if (m.codomain().signature() != domain.signature()) {
      return EmbeddingViolation{
          "factors[" + std::to_string(i) + "]: signature differs from the domain", i, {}};
    }
    if (auto v = find_homomorphism_violation(m)) {
      return EmbeddingViolation{"maps[" + std::to_string(i) + "]: not a homomorphism at " +
                                    domain.signature()[v->symbol].name + format_tuple(v->args) +
                                    ": image of result is " +
                                    std::to_string(v->image_of_result) +
                                    ", result of images is " +
                                    std::to_string(v->result_of_images),
                                i, {}};
    }
  }
  for (element a = 0; a < domain.size(); ++a) {
    for (element b = a + 1; b < domain.size(); ++b) {
      bool same = true;
      for (auto const& m : coords) {
        if (m(a) != m(b)) {
          same = false;
          break;
        }
      }
      if (same) {
        return EmbeddingViolation{"embedding: joint map identifies elements " +
                                      std::to_string(a) + " and " + std::to_string(b),
                                  {}, std::pair{a, b}};
      }
    }
  }
  return std::nullopt;
}

class ProductEmbedding {
 public:
  /// Checks that each coordinate is a homomorphism out of `domain` and that
  /// the joint map is injective.
  ProductEmbedding(FiniteAlgebra domain, std::vector<AlgebraMap> coords, Caps const& caps = {})
      : domain_(std::move(domain)), coords_(std::move(coords)) {
    if (auto v = find_embedding_violation(domain_, coords_, caps)) {
      throw input_error(v->message);
    }
    for (auto const& m : coords_) {
      factors_.push_back(m.codomain());
    }
  }

  FiniteAlgebra const& domain() const noexcept { return domain_; }
  Signature const& signature() const noexcept { return domain_.signature(); }
  std::vector<AlgebraMap> const& coords() const noexcept { return coords_; }
  std::vector<FiniteAlgebra> const& factors() const noexcept { return factors_; }
  std::size_t index_count() const noexcept { return coords_.size(); }

  IndexSubset all_indices() const { return IndexSubset::full(index_count()); }

  /// {i : f_i(a) = f_i(b)}
  mask_type agreement(element a, element b) const {
    mask_type m = 0;
    for (std::size_t i = 0; i < coords_.size(); ++i) {
      if (coords_[i](a) == coords_[i](b)) {
        m |= mask_type{1} << i;
      }
    }
    return m;
  }

  FiniteAlgebra product(Caps const& caps = {}) const {
    return FiniteAlgebra::product(signature(), factors_, caps);
  }

  /// f itself, as a map into the encoded product.
  AlgebraMap joint_map(Caps const& caps = {}) const {
    auto prod = product(caps);
    std::vector<element> values(domain_.size());
    std::vector<element> coords(coords_.size());
    for (element a = 0; a < domain_.size(); ++a) {
      for (std::size_t i = 0; i < coords_.size(); ++i) {
        coords[i] = coords_[i](a);
      }
      values[a] = prod.encode(coords);
    }
    return AlgebraMap(domain_, std::move(prod), std::move(values));
  }

  /// f ∘ p_{I,J} as an embedding indexed by J; J must lie in U(f).
  ProductEmbedding restrict_to(IndexSubset const& j, Caps const& caps = {}) const {
    check_subset(j);
    std::vector<AlgebraMap> kept;
    for (auto i : j.indices()) {
      kept.push_back(coords_[i]);
    }
    if (auto v = find_embedding_violation(domain_, kept, caps)) {
      throw precondition_error("restrict_to " + j.to_string() + ": " + v->message);
    }
    return ProductEmbedding(domain_, std::move(kept), caps);
  }

  void check_subset(IndexSubset const& j) const {
    if (j.ground_size() != index_count()) {
      throw input_error("index subset over " + std::to_string(j.ground_size()) +
                        " indices for an embedding with " + std::to_string(index_count()));
    }
  }

 private:
  FiniteAlgebra domain_;
  std::vector<AlgebraMap> coords_;
  std::vector<FiniteAlgebra> factors_;
};

/// The factored map f_J : A → ∏_{i∈J} B_i if it is injective.
inline std::optional<AlgebraMap> factors_through(ProductEmbedding const& f, IndexSubset const& j,
                                                 Caps const& caps = {}) {
  f.check_subset(j);
  auto target = FiniteAlgebra::product(f.signature(), select_factors(f.factors(), j), caps);
  auto indices = j.indices();
  std::vector<element> values(f.domain().size());
  std::vector<element> coords(indices.size());
  for (element a = 0; a < values.size(); ++a) {
    for (std::size_t k = 0; k < indices.size(); ++k) {
      coords[k] = f.coords()[indices[k]](a);
    }
    values[a] = target.encode(coords);
  }
  AlgebraMap m(f.domain(), std::move(target), std::move(values));
  if (!kernel(m).is_finest()) {
    return std::nullopt;
  }
  return m;
}

/// U(f), enumerated exactly.  J fails to factor iff some pair a ≠ b agrees
/// on all of J, i.e. J lies below one of the agreement sets; those sets are
/// marked and pushed down to their subsets.
inline SubsetFamily factoring_family(ProductEmbedding const& f, Caps const& caps = {}) {
  std::size_t n = f.index_count();
  if (n > caps.max_index_set || n > hard_index_set_limit) {
    throw cap_exceeded("factoring_family: " + std::to_string(n) +
                       " indices exceed the enumeration cap " +
                       std::to_string(std::min(caps.max_index_set, hard_index_set_limit)));
  }
  std::size_t count = std::size_t{1} << n;
  std::vector<bool> collapsing(count, false);
  for (element a = 0; a < f.domain().size(); ++a) {
    for (element b = a + 1; b < f.domain().size(); ++b) {
      collapsing[f.agreement(a, b)] = true;
    }
  }
  for (std::size_t bit = 0; bit < n; ++bit) {
    std::size_t b = std::size_t{1} << bit;
    for (std::size_t m = 0; m < count; ++m) {
      if (!(m & b) && collapsing[m | b]) {
        collapsing[m] = true;
      }
    }
  }
  return SubsetFamily::from_predicate(n, [&](mask_type m) { return !collapsing[m]; });
}

struct EmbeddingClass {
  enum class Kind { decomposable, indecomposable, neither };
  Kind kind = Kind::indecomposable;
  /// Decomposable: J with J and I∖J in U(f).  Neither: J with neither.
  std::optional<IndexSubset> witness;

  friend bool operator==(EmbeddingClass const&, EmbeddingClass const&) = default;
};

inline char const* to_string(EmbeddingClass::Kind k) {
  switch (k) {
    case EmbeddingClass::Kind::decomposable:
      return "decomposable";
    case EmbeddingClass::Kind::indecomposable:
      return "indecomposable";
    case EmbeddingClass::Kind::neither:
      return "neither";
  }
  return "?";
}

/// Least-bitmask witnesses.  Decomposable takes precedence over Neither.
inline EmbeddingClass classify(SubsetFamily const& u) {
  std::size_t n = u.ground_size();
  mask_type full = IndexSubset::full_mask(n);
  std::optional<mask_type> neither;
  for (std::size_t m = 0; m <= full; ++m) {
    auto j = static_cast<mask_type>(m);
    bool in_j = u.contains(j);
    bool in_c = u.contains(full & ~j);
    if (in_j && in_c) {
      return {EmbeddingClass::Kind::decomposable, IndexSubset(n, j)};
    }
    if (!in_j && !in_c && !neither) {
      neither = j;
    }
  }
  if (neither) {
    return {EmbeddingClass::Kind::neither, IndexSubset(n, *neither)};
  }
  return {EmbeddingClass::Kind::indecomposable, std::nullopt};
}

inline EmbeddingClass classify(ProductEmbedding const& f, Caps const& caps = {}) {
  return classify(factoring_family(f, caps));
}

inline bool is_decomposition_witness(SubsetFamily const& u, IndexSubset const& j) {
  return u.contains(j) && u.contains(j.complement());
}

/// A → ∏_{I⊔I} B with both halves equal to f.
inline ProductEmbedding doubled_embedding(ProductEmbedding const& f, Caps const& caps = {}) {
  auto coords = f.coords();
  coords.insert(coords.end(), f.coords().begin(), f.coords().end());
  return ProductEmbedding(f.domain(), std::move(coords), caps);
}

/// g : A × A → ∏_I B_i with f = Δ ∘ g: the product of f_J and f_{I∖J}
/// followed by the disjoint-union isomorphism and the reindexing back to I's
/// order.  The last two are evaluated only on the image of A × A.
inline AlgebraMap diagonal_factorization(ProductEmbedding const& f, IndexSubset const& j,
                                         Caps const& caps = {}) {
  f.check_subset(j);
  auto rest = j.complement();
  auto f_j = factors_through(f, j, caps);
  auto f_rest = factors_through(f, rest, caps);
  if (!f_j || !f_rest) {
    throw precondition_error("diagonal_factorization: " + j.to_string() +
                             " is not a decomposability witness");
  }
  auto paired = product_map(*f_j, *f_rest, caps);
  auto const& left = f_j->codomain();
  auto const& right = f_rest->codomain();
  auto target = f.product(caps);
  auto order = j.indices();
  auto tail = rest.indices();
  order.insert(order.end(), tail.begin(), tail.end());

  std::vector<element> values(paired.domain().size());
  std::vector<element> coords(f.index_count());
  for (std::size_t p = 0; p < values.size(); ++p) {
    auto halves = paired.codomain().coordinates(paired(static_cast<element>(p)));
    auto joined = left.coordinates(halves[0]);
    auto second = right.coordinates(halves[1]);
    joined.insert(joined.end(), second.begin(), second.end());
    for (std::size_t k = 0; k < order.size(); ++k) {
      coords[order[k]] = joined[k];
    }
    values[p] = target.encode(coords);
  }
  return AlgebraMap(paired.domain(), std::move(target), std::move(values));
}

struct ThinResult {
  IndexSubset j0;
  ProductEmbedding thinned;
};

/// Restricts f to a minimal J0 with J0 and I∖J0 both in U(f), preferring
/// smallest cardinality then smallest bitmask; returns f unchanged when no
/// such set exists.  Requires a non-trivial finitely subdirectly
/// irreducible domain.
inline ThinResult thin_to_indecomposable(ProductEmbedding const& f, Caps const& caps = {}) {
  if (f.domain().size() < 2) {
    throw precondition_error("thin_to_indecomposable: the domain is trivial");
  }
  if (!is_finitely_subdirectly_irreducible(f.domain(), caps)) {
    throw precondition_error(
        "thin_to_indecomposable: the domain is not finitely subdirectly irreducible");
  }
  auto u = factoring_family(f, caps);
  std::optional<mask_type> best;
  for (auto m : u.masks()) {
    if (!is_decomposition_witness(u, u.subset(m))) {
      continue;
    }
    if (!best || std::popcount(m) < std::popcount(*best) ||
        (std::popcount(m) == std::popcount(*best) && m < *best)) {
      best = m;
    }
  }
  if (!best) {
    return {f.all_indices(), f};
  }
  IndexSubset j0(f.index_count(), *best);
  return {j0, f.restrict_to(j0, caps)};
}

/// For J, K in U(f): none of I∖(J∪K), J∖K, K∖J is in U(f) and J∩K is.
/// Returns the first (J, K) where that fails.
inline std::optional<std::pair<mask_type, mask_type>> find_four_set_violation(
    SubsetFamily const& u) {
  mask_type full = IndexSubset::full_mask(u.ground_size());
  for (auto j : u.masks()) {
    for (auto k : u.masks()) {
      bool ok = !u.contains(full & ~(j | k)) && !u.contains(j & ~k) &&
                !u.contains(k & ~j) && u.contains(j & k);
      if (!ok) {
        return std::pair{j, k};
      }
    }
  }
  return std::nullopt;
}

/// f_J ∘ p_{J,J∩K} = f_K ∘ p_{K,J∩K} = f ∘ p_{I,J∩K} elementwise, and the
/// common map is injective.  J and K must be in U(f).
inline bool check_intersection_factorization(ProductEmbedding const& f, IndexSubset const& j,
                                             IndexSubset const& k, Caps const& caps = {}) {
  auto f_j = factors_through(f, j, caps);
  auto f_k = factors_through(f, k, caps);
  if (!f_j || !f_k) {
    throw precondition_error("check_intersection_factorization: J or K is not in U(f)");
  }
  auto jk = j & k;
  auto meet_target =
      FiniteAlgebra::product(f.signature(), select_factors(f.factors(), jk), caps);
  auto whole = f.joint_map(caps);
  auto j_in_jk = relative_subset(j, jk);
  auto k_in_jk = relative_subset(k, jk);
  std::vector<element> common(f.domain().size());
  for (element a = 0; a < f.domain().size(); ++a) {
    element via_j = project_element(f_j->codomain(), meet_target, j_in_jk, (*f_j)(a));
    element via_k = project_element(f_k->codomain(), meet_target, k_in_jk, (*f_k)(a));
    element via_i = project_element(whole.codomain(), meet_target, jk, whole(a));
    if (via_j != via_k || via_k != via_i) {
      return false;
    }
    common[a] = via_i;
  }
  return kernel(AlgebraMap(f.domain(), meet_target, std::move(common))).is_finest();
}

}  // namespace rafilter
