#pragma once

#include <algorithm>
#include <compare>
#include <map>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rafilter/error.hpp"
#include "rafilter/types.hpp"

namespace rafilter {

/// Disjoint-set forest with path halving and union by size.
class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), element{0});
  }

  element find(element x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  /// Returns true if the two classes were distinct.
  bool unite(element x, element y) {
    x = find(x);
    y = find(y);
    if (x == y) {
      return false;
    }
    if (size_[x] < size_[y]) {
      std::swap(x, y);
    }
    parent_[y] = x;
    size_[x] += size_[y];
    return true;
  }

  std::size_t size() const noexcept { return parent_.size(); }

 private:
  std::vector<element> parent_;
  std::vector<std::size_t> size_;
};

/// An equivalence relation on 0..n-1, stored as the least element of each
/// element's block.  Two partitions compare equal iff they are the same
/// relation.
class Partition {
 public:
  Partition() = default;

  /// `reps[x]` must be the least element of the block of x.
  explicit Partition(std::vector<element> reps) : rep_(std::move(reps)) {
    for (std::size_t x = 0; x < rep_.size(); ++x) {
      element r = rep_[x];
      if (r > x || rep_[r] != r) {
        throw input_error("partition: entry " + std::to_string(x) +
                          " is not a canonical block representative");
      }
    }
  }

  static Partition finest(std::size_t n) {
    std::vector<element> reps(n);
    std::iota(reps.begin(), reps.end(), element{0});
    return Partition(std::move(reps), canonical_tag{});
  }

  static Partition coarsest(std::size_t n) {
    return Partition(std::vector<element>(n, 0), canonical_tag{});
  }

  /// x ~ y iff labels[x] == labels[y]; labels are arbitrary.
  template <typename T>
  static Partition from_labels(std::span<const T> labels) {
    std::map<T, element> first_seen;
    std::vector<element> reps(labels.size());
    for (std::size_t x = 0; x < labels.size(); ++x) {
      reps[x] =
          first_seen.try_emplace(labels[x], static_cast<element>(x)).first->second;
    }
    return Partition(std::move(reps), canonical_tag{});
  }

  static Partition from_union_find(UnionFind& uf) {
    std::size_t n = uf.size();
    std::vector<element> least(n, static_cast<element>(n));
    std::vector<element> reps(n);
    for (std::size_t x = 0; x < n; ++x) {
      element root = uf.find(static_cast<element>(x));
      if (least[root] == n) {
        least[root] = static_cast<element>(x);
      }
      reps[x] = least[root];
    }
    return Partition(std::move(reps), canonical_tag{});
  }

  std::size_t universe_size() const noexcept { return rep_.size(); }
  element rep(element x) const { return rep_[x]; }
  bool related(element x, element y) const { return rep_[x] == rep_[y]; }
  std::span<const element> reps() const noexcept { return rep_; }

  std::size_t block_count() const {
    std::size_t count = 0;
    for (std::size_t x = 0; x < rep_.size(); ++x) {
      count += rep_[x] == x;
    }
    return count;
  }

  /// Index of the block of each element, blocks numbered by least element.
  std::vector<element> block_indices() const {
    std::vector<element> index(rep_.size());
    element next = 0;
    for (std::size_t x = 0; x < rep_.size(); ++x) {
      index[x] = rep_[x] == x ? next++ : index[rep_[x]];
    }
    return index;
  }

  std::vector<std::vector<element>> blocks() const {
    std::vector<std::vector<element>> result;
    auto index = block_indices();
    for (std::size_t x = 0; x < rep_.size(); ++x) {
      if (index[x] == result.size()) {
        result.emplace_back();
      }
      result[index[x]].push_back(static_cast<element>(x));
    }
    return result;
  }

  bool is_finest() const { return block_count() == rep_.size(); }
  bool is_coarsest() const { return block_count() <= 1; }

  /// True iff every block of *this lies inside a block of `other`.
  bool refines(Partition const& other) const {
    check_same_size(other);
    for (std::size_t x = 0; x < rep_.size(); ++x) {
      if (!other.related(static_cast<element>(x), rep_[x])) {
        return false;
      }
    }
    return true;
  }

  /// Renders e.g. "{02|13}"; elements above 9 are comma separated.
  std::string to_string() const {
    bool wide = rep_.size() > 10;
    std::string out = "{";
    bool first_block = true;
    for (auto const& block : blocks()) {
      if (!first_block) {
        out += '|';
      }
      first_block = false;
      bool first = true;
      for (element x : block) {
        if (wide && !first) {
          out += ',';
        }
        first = false;
        out += std::to_string(x);
      }
    }
    return out + "}";
  }

  friend bool operator==(Partition const&, Partition const&) = default;
  friend auto operator<=>(Partition const&, Partition const&) = default;

  friend Partition meet(Partition const& a, Partition const& b) {
    a.check_same_size(b);
    std::vector<std::pair<element, element>> labels(a.rep_.size());
    for (std::size_t x = 0; x < labels.size(); ++x) {
      labels[x] = {a.rep_[x], b.rep_[x]};
    }
    return from_labels(std::span<const std::pair<element, element>>(labels));
  }

  friend Partition join(Partition const& a, Partition const& b) {
    a.check_same_size(b);
    UnionFind uf(a.rep_.size());
    for (std::size_t x = 0; x < a.rep_.size(); ++x) {
      uf.unite(static_cast<element>(x), a.rep_[x]);
      uf.unite(static_cast<element>(x), b.rep_[x]);
    }
    return from_union_find(uf);
  }

 private:
  struct canonical_tag {};
  Partition(std::vector<element> reps, canonical_tag) : rep_(std::move(reps)) {}

  void check_same_size(Partition const& other) const {
    if (other.rep_.size() != rep_.size()) {
      throw input_error("partitions of different universes (" +
                        std::to_string(rep_.size()) + " vs " +
                        std::to_string(other.rep_.size()) + ")");
    }
  }

  std::vector<element> rep_;
};

}  // namespace rafilter
