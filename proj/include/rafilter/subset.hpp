#pragma once

#include <algorithm>
#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rafilter/config.hpp"
#include "rafilter/error.hpp"

namespace rafilter {

using mask_type = std::uint32_t;

/// A subset of the index set 0..n-1, bit i standing for index i.
class IndexSubset {
 public:
  IndexSubset(std::size_t ground, mask_type mask) : ground_(ground), mask_(mask) {
    if (ground > 31) {
      throw input_error("index subset: ground set of " + std::to_string(ground) +
                        " indices is too large for a bitmask");
    }
    if ((mask >> ground) != 0) {
      throw input_error("index subset: mask " + std::to_string(mask) +
                        " has bits beyond index " + std::to_string(ground - 1));
    }
  }

  static IndexSubset empty(std::size_t ground) { return {ground, 0}; }
  static IndexSubset full(std::size_t ground) { return {ground, full_mask(ground)}; }

  static IndexSubset of(std::size_t ground, std::span<const std::size_t> indices) {
    mask_type mask = 0;
    for (auto i : indices) {
      if (i >= ground) {
        throw input_error("index subset: index " + std::to_string(i) +
                          " is outside 0.." + std::to_string(ground - 1));
      }
      mask |= mask_type{1} << i;
    }
    return {ground, mask};
  }

  static IndexSubset of(std::size_t ground, std::initializer_list<std::size_t> indices) {
    return of(ground, std::span<const std::size_t>(indices.begin(), indices.size()));
  }

  static mask_type full_mask(std::size_t ground) {
    return ground == 0 ? 0 : static_cast<mask_type>((std::uint64_t{1} << ground) - 1);
  }

  std::size_t ground_size() const noexcept { return ground_; }
  mask_type mask() const noexcept { return mask_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(std::popcount(mask_)); }
  bool is_empty() const noexcept { return mask_ == 0; }
  bool contains(std::size_t i) const noexcept { return i < ground_ && ((mask_ >> i) & 1U); }

  std::vector<std::size_t> indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < ground_; ++i) {
      if (contains(i)) {
        out.push_back(i);
      }
    }
    return out;
  }

  IndexSubset complement() const { return {ground_, full_mask(ground_) & ~mask_}; }
  bool subset_of(IndexSubset const& other) const {
    check_ground(other);
    return (mask_ & ~other.mask_) == 0;
  }

  friend IndexSubset operator&(IndexSubset const& a, IndexSubset const& b) {
    a.check_ground(b);
    return {a.ground_, a.mask_ & b.mask_};
  }
  friend IndexSubset operator|(IndexSubset const& a, IndexSubset const& b) {
    a.check_ground(b);
    return {a.ground_, a.mask_ | b.mask_};
  }
  friend IndexSubset operator-(IndexSubset const& a, IndexSubset const& b) {
    a.check_ground(b);
    return {a.ground_, a.mask_ & ~b.mask_};
  }

  /// "[0,2]"
  std::string to_string() const {
    std::string out = "[";
    bool first = true;
    for (auto i : indices()) {
      if (!first) {
        out += ',';
      }
      first = false;
      out += std::to_string(i);
    }
    return out + "]";
  }

  friend bool operator==(IndexSubset const&, IndexSubset const&) = default;
  friend auto operator<=>(IndexSubset const&, IndexSubset const&) = default;

 private:
  void check_ground(IndexSubset const& other) const {
    if (other.ground_ != ground_) {
      throw input_error("index subsets over different ground sets");
    }
  }

  std::size_t ground_;
  mask_type mask_;
};

/// `inner`, a subset of `outer`, re-expressed over the positions of outer's
/// indices (ground set |outer|).
inline IndexSubset relative_subset(IndexSubset const& outer, IndexSubset const& inner) {
  if (!inner.subset_of(outer)) {
    throw input_error("relative_subset: " + inner.to_string() + " is not inside " +
                      outer.to_string());
  }
  auto positions = outer.indices();
  mask_type mask = 0;
  for (std::size_t p = 0; p < positions.size(); ++p) {
    if (inner.contains(positions[p])) {
      mask |= mask_type{1} << p;
    }
  }
  return {positions.size(), mask};
}

/// A set of subsets of 0..n-1 with dense membership lookup.
class SubsetFamily {
 public:
  explicit SubsetFamily(std::size_t ground) : ground_(ground) {
    if (ground > hard_index_set_limit) {
      throw cap_exceeded("subset family: ground set of " + std::to_string(ground) +
                         " indices exceeds " + std::to_string(hard_index_set_limit));
    }
    present_.assign(std::size_t{1} << ground, false);
  }

  SubsetFamily(std::size_t ground, std::span<const mask_type> members) : SubsetFamily(ground) {
    mask_type limit = IndexSubset::full_mask(ground);
    for (auto m : members) {
      if ((m & ~limit) != 0) {
        throw input_error("subset family: member " + std::to_string(m) +
                          " is outside the ground set");
      }
      if (present_[m]) {
        throw input_error("subset family: duplicate member " + std::to_string(m));
      }
      present_[m] = true;
    }
    members_.assign(members.begin(), members.end());
    std::sort(members_.begin(), members_.end());
  }

  SubsetFamily(std::size_t ground, std::initializer_list<mask_type> members)
      : SubsetFamily(ground, std::span<const mask_type>(members.begin(), members.size())) {}

  /// All J with pred(J).
  static SubsetFamily from_predicate(std::size_t ground,
                                     std::function<bool(mask_type)> const& pred) {
    SubsetFamily u(ground);
    for (std::size_t m = 0; m < u.present_.size(); ++m) {
      if (pred(static_cast<mask_type>(m))) {
        u.present_[m] = true;
        u.members_.push_back(static_cast<mask_type>(m));
      }
    }
    return u;
  }

  /// The principal ultrafilter of all sets containing i0.
  static SubsetFamily principal(std::size_t ground, std::size_t i0) {
    if (i0 >= ground) {
      throw input_error("principal family: index out of range");
    }
    return from_predicate(ground, [i0](mask_type m) { return ((m >> i0) & 1U) != 0; });
  }

  std::size_t ground_size() const noexcept { return ground_; }
  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }
  std::vector<mask_type> const& masks() const noexcept { return members_; }

  bool contains(mask_type m) const {
    return m < present_.size() && present_[m];
  }
  bool contains(IndexSubset const& j) const {
    return j.ground_size() == ground_ && contains(j.mask());
  }

  IndexSubset subset(mask_type m) const { return {ground_, m}; }

  friend bool operator==(SubsetFamily const& a, SubsetFamily const& b) {
    return a.ground_ == b.ground_ && a.members_ == b.members_;
  }

 private:
  std::size_t ground_;
  std::vector<bool> present_;
  std::vector<mask_type> members_;
};

/// Every superset of every member is a member.  Checking one added index at
/// a time is enough.
inline bool is_upward_closed(SubsetFamily const& u) {
  for (auto m : u.masks()) {
    for (std::size_t i = 0; i < u.ground_size(); ++i) {
      mask_type bigger = m | (mask_type{1} << i);
      if (!u.contains(bigger)) {
        return false;
      }
    }
  }
  return true;
}

struct FilterReport {
  bool upward_closed = false;
  bool intersection_closed = false;
  bool proper = false;
  bool ultra = false;
  std::optional<std::size_t> principal_witness;
  // First failure witnesses, where a flag is false.
  std::optional<std::pair<mask_type, mask_type>> missing_superset;  // member, superset
  std::optional<std::pair<mask_type, mask_type>> missing_intersection;
  std::optional<mask_type> undecided;  // neither J nor its complement

  bool is_filter() const { return upward_closed && intersection_closed && proper; }
};

inline FilterReport filter_properties(SubsetFamily const& u) {
  FilterReport r;
  std::size_t n = u.ground_size();
  mask_type full = IndexSubset::full_mask(n);

  r.upward_closed = true;
  for (auto m : u.masks()) {
    for (std::size_t i = 0; i < n && r.upward_closed; ++i) {
      mask_type bigger = m | (mask_type{1} << i);
      if (!u.contains(bigger)) {
        r.upward_closed = false;
        r.missing_superset = {m, bigger};
      }
    }
    if (!r.upward_closed) {
      break;
    }
  }

  // Pairwise for small families.  A large upward-closed family is closed
  // under intersections iff the intersection of all members belongs to it.
  r.intersection_closed = true;
  constexpr std::size_t pairwise_limit = 4096;
  if (u.size() <= pairwise_limit || !r.upward_closed) {
    auto const& ms = u.masks();
    for (std::size_t i = 0; i < ms.size() && r.intersection_closed; ++i) {
      for (std::size_t j = i + 1; j < ms.size(); ++j) {
        if (!u.contains(ms[i] & ms[j])) {
          r.intersection_closed = false;
          r.missing_intersection = {ms[i], ms[j]};
          break;
        }
      }
    }
  } else {
    mask_type core = full;
    for (auto m : u.masks()) {
      core &= m;
    }
    if (!u.contains(core)) {
      r.intersection_closed = false;
      // Shrink the core one member at a time to name an offending pair.
      mask_type acc = u.masks().front();
      for (auto m : u.masks()) {
        if (!u.contains(acc & m)) {
          r.missing_intersection = {acc, m};
          break;
        }
        acc &= m;
      }
    }
  }

  r.proper = !u.empty() && !u.contains(mask_type{0});

  bool decides_all = true;
  for (std::size_t m = 0; m <= full; ++m) {
    auto mm = static_cast<mask_type>(m);
    if (!u.contains(mm) && !u.contains(full & ~mm)) {
      decides_all = false;
      r.undecided = mm;
      break;
    }
  }
  r.ultra = r.is_filter() && decides_all;

  for (std::size_t i = 0; i < n; ++i) {
    if (u.contains(mask_type{1} << i)) {
      r.principal_witness = i;
      break;
    }
  }
  return r;
}

}  // namespace rafilter
