#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rafilter/algebra.hpp"
#include "rafilter/config.hpp"
#include "rafilter/error.hpp"
#include "rafilter/partition.hpp"

namespace rafilter {

/// Argument tuple and position where replacing args[position] by a related
/// element moves the result to a different block.
struct CompatibilityViolation {
  std::size_t symbol = 0;
  std::size_t position = 0;
  std::vector<element> args;
  element replacement = 0;
};

// A partition is compatible iff it is compatible with every basic
// translation, so it suffices to swap one argument at a time for its
// block representative.
inline std::optional<CompatibilityViolation> find_compatibility_violation(
    FiniteAlgebra const& a, Partition const& p) {
  if (p.universe_size() != a.size()) {
    throw input_error("congruence: partition of " + std::to_string(p.universe_size()) +
                      " elements for an algebra of size " + std::to_string(a.size()));
  }
  std::optional<CompatibilityViolation> found;
  std::vector<element> moved;
  for (std::size_t s = 0; s < a.signature().size() && !found; ++s) {
    std::size_t arity = a.signature()[s].arity;
    for_each_tuple(a.size(), arity, [&](std::span<const element> args) {
      if (found) {
        return;
      }
      element base = a.apply(s, args);
      for (std::size_t j = 0; j < arity; ++j) {
        element r = p.rep(args[j]);
        if (r == args[j]) {
          continue;
        }
        moved.assign(args.begin(), args.end());
        moved[j] = r;
        if (!p.related(base, a.apply(s, moved))) {
          found = CompatibilityViolation{s, j, {args.begin(), args.end()}, r};
          return;
        }
      }
    });
  }
  return found;
}

inline bool is_congruence(FiniteAlgebra const& a, Partition const& p) {
  return !find_compatibility_violation(a, p).has_value();
}

/// An operation-compatible partition of an algebra's universe.
class Congruence {
 public:
  Congruence(FiniteAlgebra algebra, Partition partition)
      : algebra_(std::move(algebra)), partition_(std::move(partition)) {
    if (auto v = find_compatibility_violation(algebra_, partition_)) {
      throw input_error("congruence: partition " + partition_.to_string() +
                        " is not compatible with '" +
                        algebra_.signature()[v->symbol].name + "'");
    }
  }

  /// For partitions whose compatibility is known by construction, such as
  /// kernels of verified homomorphisms or relations defined by a filter.
  static Congruence assume_compatible(FiniteAlgebra algebra, Partition partition) {
    if (partition.universe_size() != algebra.size()) {
      throw input_error("congruence: partition size does not match the algebra");
    }
    return Congruence(std::move(algebra), std::move(partition), unchecked{});
  }

  FiniteAlgebra const& algebra() const noexcept { return algebra_; }
  Partition const& partition() const noexcept { return partition_; }
  bool is_diagonal() const { return partition_.is_finest(); }

  friend bool operator==(Congruence const& a, Congruence const& b) {
    return a.partition_ == b.partition_;
  }

 private:
  struct unchecked {};
  Congruence(FiniteAlgebra algebra, Partition partition, unchecked)
      : algebra_(std::move(algebra)), partition_(std::move(partition)) {}

  FiniteAlgebra algebra_;
  Partition partition_;
};

inline Congruence diagonal_congruence(FiniteAlgebra const& a) {
  return Congruence::assume_compatible(a, Partition::finest(a.size()));
}

inline Congruence full_congruence(FiniteAlgebra const& a) {
  return Congruence::assume_compatible(a, Partition::coarsest(a.size()));
}

/// Kernel of a homomorphism; throws if m does not preserve the operations.
inline Congruence kernel_congruence(AlgebraMap const& m) {
  if (!is_homomorphism(m)) {
    throw precondition_error("kernel_congruence: map is not a homomorphism");
  }
  return Congruence::assume_compatible(m.domain(), kernel(m));
}

/// Least congruence containing `pairs`: union-find closure under
/// one-argument substitutions, repeated until a full pass merges nothing.
inline Congruence congruence_generated_by(
    FiniteAlgebra const& a, std::span<const std::pair<element, element>> pairs) {
  UnionFind uf(a.size());
  for (auto [x, y] : pairs) {
    if (x >= a.size() || y >= a.size()) {
      throw input_error("congruence_generated_by: pair (" + std::to_string(x) + "," +
                        std::to_string(y) + ") is outside 0.." +
                        std::to_string(a.size() - 1));
    }
    uf.unite(x, y);
  }
  std::vector<element> moved;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t s = 0; s < a.signature().size(); ++s) {
      std::size_t arity = a.signature()[s].arity;
      for_each_tuple(a.size(), arity, [&](std::span<const element> args) {
        for (std::size_t j = 0; j < arity; ++j) {
          element root = uf.find(args[j]);
          if (root == args[j]) {
            continue;
          }
          moved.assign(args.begin(), args.end());
          moved[j] = root;
          changed |= uf.unite(a.apply(s, args), a.apply(s, moved));
        }
      });
    }
  }
  return Congruence::assume_compatible(a, Partition::from_union_find(uf));
}

inline Congruence congruence_generated_by(
    FiniteAlgebra const& a, std::initializer_list<std::pair<element, element>> pairs) {
  return congruence_generated_by(
      a, std::span<const std::pair<element, element>>(pairs.begin(), pairs.size()));
}

/// The congruence lattice: principal congruences closed under joins.
/// Sorted by decreasing block count, so the diagonal comes first and the
/// full relation last.
inline std::vector<Congruence> all_congruences(FiniteAlgebra const& a, Caps const& caps = {}) {
  if (a.size() > caps.max_algebra_size) {
    throw cap_exceeded("all_congruences: algebra of size " + std::to_string(a.size()) +
                       " exceeds the cap " + std::to_string(caps.max_algebra_size));
  }
  std::set<Partition> found{Partition::finest(a.size())};
  for (element x = 0; x < a.size(); ++x) {
    for (element y = x + 1; y < a.size(); ++y) {
      std::pair<element, element> pair{x, y};
      found.insert(congruence_generated_by(a, std::span(&pair, 1)).partition());
    }
  }
  std::vector<Partition> list(found.begin(), found.end());
  for (std::size_t i = 0; i < list.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      Partition joined = join(list[i], list[j]);
      if (found.insert(joined).second) {
        list.push_back(std::move(joined));
      }
    }
  }
  std::sort(list.begin(), list.end(), [](Partition const& p, Partition const& q) {
    auto bp = p.block_count();
    auto bq = q.block_count();
    return bp != bq ? bp > bq : p < q;
  });
  std::vector<Congruence> result;
  result.reserve(list.size());
  for (auto& p : list) {
    result.push_back(Congruence::assume_compatible(a, std::move(p)));
  }
  return result;
}

struct Quotient {
  FiniteAlgebra algebra;
  AlgebraMap map;
};

/// A/c with blocks numbered by least element, plus the canonical surjection.
inline Quotient quotient(FiniteAlgebra const& a, Congruence const& c, Caps const& caps = {}) {
  if (c.partition().universe_size() != a.size() ||
      c.algebra().signature() != a.signature()) {
    throw input_error("quotient: congruence belongs to a different algebra");
  }
  auto index = c.partition().block_indices();
  std::vector<element> reps;
  for (std::size_t x = 0; x < a.size(); ++x) {
    if (c.partition().rep(static_cast<element>(x)) == x) {
      reps.push_back(static_cast<element>(x));
    }
  }
  std::vector<element> lifted;
  auto q = FiniteAlgebra::from_function(
      a.signature(), reps.size(),
      [&](std::size_t s, std::span<const element> args) {
        lifted.resize(args.size());
        for (std::size_t j = 0; j < args.size(); ++j) {
          lifted[j] = reps[args[j]];
        }
        return index[a.apply(s, lifted)];
      },
      caps);
  return Quotient{q, AlgebraMap(a, q, std::move(index))};
}

inline Quotient quotient(FiniteAlgebra const& a, Partition const& p, Caps const& caps = {}) {
  return quotient(a, Congruence(a, p), caps);
}

inline Partition intersect_all(std::size_t n, std::span<const Congruence> thetas) {
  Partition result = Partition::coarsest(n);
  for (auto const& t : thetas) {
    result = meet(result, t.partition());
  }
  return result;
}

/// Two congruences, neither the diagonal, whose meet is the diagonal.
inline std::optional<std::pair<Partition, Partition>> find_diagonal_splitting(
    FiniteAlgebra const& a, Caps const& caps = {}) {
  auto lattice = all_congruences(a, caps);
  // lattice[0] is the diagonal.
  for (std::size_t i = 1; i < lattice.size(); ++i) {
    for (std::size_t j = i + 1; j < lattice.size(); ++j) {
      if (meet(lattice[i].partition(), lattice[j].partition()).is_finest()) {
        return std::pair{lattice[i].partition(), lattice[j].partition()};
      }
    }
  }
  return std::nullopt;
}

/// |a| >= 2 and no two congruences other than the diagonal meet in the
/// diagonal.  For a finite lattice this is the same as complete
/// meet-irreducibility of the diagonal, so it decides every variant of
/// subdirect irreducibility at once.
inline bool is_finitely_subdirectly_irreducible(FiniteAlgebra const& a,
                                                Caps const& caps = {}) {
  if (a.size() < 2) {
    return false;
  }
  return !find_diagonal_splitting(a, caps).has_value();
}

/// Given congruences meeting in the diagonal, true iff one of them is the
/// diagonal.
inline bool is_subdirectly_irreducible_family(FiniteAlgebra const& a,
                                              std::span<const Congruence> thetas) {
  for (auto const& t : thetas) {
    if (t.partition().universe_size() != a.size()) {
      throw input_error("is_subdirectly_irreducible_family: congruence of the wrong size");
    }
  }
  if (!intersect_all(a.size(), thetas).is_finest()) {
    throw precondition_error(
        "is_subdirectly_irreducible_family: the congruences do not meet in the diagonal");
  }
  return std::any_of(thetas.begin(), thetas.end(),
                     [](Congruence const& t) { return t.is_diagonal(); });
}

}  // namespace rafilter
