#pragma once

// Finite algebras of an arbitrary signature (operations only) and maps
// between them.
//
// Two representations share one value type.  A tabled algebra stores one
// flat table per symbol, indexed by the argument tuple read as a base-n
// number with the first argument most significant.  A product algebra
// stores its factors and evaluates componentwise; its elements are tuples in
// mixed-radix encoding with coordinate 0 most significant.  Products are
// never tabulated implicitly, since a binary table over a 10^4-element
// product already has 10^8 entries.

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rafilter/config.hpp"
#include "rafilter/error.hpp"
#include "rafilter/partition.hpp"
#include "rafilter/types.hpp"

namespace rafilter {

struct Symbol {
  std::string name;
  std::size_t arity = 0;

  friend bool operator==(Symbol const&, Symbol const&) = default;
};

/// Ordered list of operation symbols.  Arity 0 symbols are constants.
class Signature {
 public:
  Signature() = default;
  Signature(std::initializer_list<Symbol> symbols)
      : Signature(std::vector<Symbol>(symbols)) {}

  explicit Signature(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {
    std::set<std::string_view> seen;
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
      if (symbols_[i].name.empty()) {
        throw input_error("signature: symbol " + std::to_string(i) +
                          " has an empty name");
      }
      if (!seen.insert(symbols_[i].name).second) {
        throw input_error("signature: duplicate symbol '" + symbols_[i].name +
                          "'");
      }
    }
  }

  std::size_t size() const noexcept { return symbols_.size(); }
  Symbol const& operator[](std::size_t i) const { return symbols_[i]; }
  std::vector<Symbol> const& symbols() const noexcept { return symbols_; }

  std::optional<std::size_t> find(std::string_view name) const {
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
      if (symbols_[i].name == name) {
        return i;
      }
    }
    return std::nullopt;
  }

  std::size_t max_arity() const {
    std::size_t m = 0;
    for (auto const& s : symbols_) {
      m = std::max(m, s.arity);
    }
    return m;
  }

  friend bool operator==(Signature const&, Signature const&) = default;

 private:
  std::vector<Symbol> symbols_;
};

namespace detail {

/// base^exp, or nullopt once the value passes `limit`.
inline std::optional<std::size_t> checked_pow(std::size_t base, std::size_t exp,
                                              std::size_t limit) {
  std::size_t result = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && result > limit / base) {
      return std::nullopt;
    }
    result *= base;
  }
  if (result > limit) {
    return std::nullopt;
  }
  return result;
}

inline std::size_t tuple_index(std::size_t n, std::span<const element> args) {
  std::size_t index = 0;
  for (element a : args) {
    index = index * n + a;
  }
  return index;
}

/// "[1][0]" for flat index 2 of a binary table over 2 elements.
inline std::string index_path(std::size_t n, std::size_t arity,
                              std::size_t flat) {
  std::vector<std::size_t> digits(arity);
  for (std::size_t pos = arity; pos-- > 0;) {
    digits[pos] = flat % n;
    flat /= n;
  }
  std::string out;
  for (auto d : digits) {
    out += "[" + std::to_string(d) + "]";
  }
  return out;
}

}  // namespace detail

/// Calls fn(span) for every tuple of length `arity` over 0..n-1, in the
/// order of flat table indices.
template <typename Fn>
void for_each_tuple(std::size_t n, std::size_t arity, Fn&& fn) {
  if (arity > 0 && n == 0) {
    return;
  }
  std::vector<element> t(arity, 0);
  for (;;) {
    fn(std::span<const element>(t));
    std::size_t pos = arity;
    for (;;) {
      if (pos == 0) {
        return;
      }
      --pos;
      if (++t[pos] < n) {
        break;
      }
      t[pos] = 0;
    }
  }
}

class FiniteAlgebra {
 public:
  /// Validates every entry; messages name the symbol and the index path.
  static FiniteAlgebra from_tables(Signature signature, std::size_t size,
                                   std::vector<std::vector<element>> tables,
                                   Caps const& caps = {}) {
    if (size == 0) {
      throw input_error("algebra: size must be positive");
    }
    if (tables.size() != signature.size()) {
      throw input_error("algebra: expected " + std::to_string(signature.size()) +
                        " tables, got " + std::to_string(tables.size()));
    }
    for (std::size_t s = 0; s < signature.size(); ++s) {
      auto const& sym = signature[s];
      auto expected = detail::checked_pow(size, sym.arity, caps.max_table_entries);
      if (!expected) {
        throw cap_exceeded("algebra: table of '" + sym.name + "' exceeds " +
                           std::to_string(caps.max_table_entries) + " entries");
      }
      if (tables[s].size() != *expected) {
        throw input_error("algebra: table of '" + sym.name + "' has " +
                          std::to_string(tables[s].size()) + " entries, expected " +
                          std::to_string(*expected));
      }
      for (std::size_t i = 0; i < tables[s].size(); ++i) {
        if (tables[s][i] >= size) {
          throw input_error("algebra: ops." + sym.name +
                            detail::index_path(size, sym.arity, i) + " = " +
                            std::to_string(tables[s][i]) + " is outside 0.." +
                            std::to_string(size - 1));
        }
      }
    }
    auto impl = std::make_shared<Impl>();
    impl->signature = std::move(signature);
    impl->size = size;
    impl->tables = std::move(tables);
    return FiniteAlgebra(std::move(impl));
  }

  /// Tabulates `op(symbol, args)` over all argument tuples.
  template <typename Op>
  static FiniteAlgebra from_function(Signature signature, std::size_t size, Op&& op,
                                     Caps const& caps = {}) {
    std::vector<std::vector<element>> tables(signature.size());
    for (std::size_t s = 0; s < signature.size(); ++s) {
      if (!detail::checked_pow(size, signature[s].arity, caps.max_table_entries)) {
        throw cap_exceeded("algebra: table of '" + signature[s].name +
                           "' exceeds the table cap");
      }
      for_each_tuple(size, signature[s].arity, [&](std::span<const element> args) {
        tables[s].push_back(static_cast<element>(op(s, args)));
      });
    }
    return from_tables(std::move(signature), size, std::move(tables), caps);
  }

  /// Componentwise product; the empty family gives the one-element algebra.
  static FiniteAlgebra product(Signature signature, std::vector<FiniteAlgebra> factors,
                               Caps const& caps = {}) {
    std::size_t size = 1;
    std::vector<std::size_t> radices;
    for (std::size_t k = 0; k < factors.size(); ++k) {
      if (factors[k].signature() != signature) {
        throw signature_mismatch("product: factor " + std::to_string(k) +
                                 " has a different signature");
      }
      std::size_t r = factors[k].size();
      if (size > caps.max_product_size / r) {
        throw cap_exceeded("product: more than " +
                           std::to_string(caps.max_product_size) + " elements");
      }
      size *= r;
      radices.push_back(r);
    }
    auto impl = std::make_shared<Impl>();
    impl->signature = std::move(signature);
    impl->size = size;
    impl->factors = std::move(factors);
    impl->radices = std::move(radices);
    impl->is_product = true;
    return FiniteAlgebra(std::move(impl));
  }

  Signature const& signature() const noexcept { return impl_->signature; }
  std::size_t size() const noexcept { return impl_->size; }
  bool is_product() const noexcept { return impl_->is_product; }

  /// Factors of a product algebra; empty for a tabled one.
  std::vector<FiniteAlgebra> const& factors() const noexcept { return impl_->factors; }

  std::vector<element> const& table(std::size_t symbol) const {
    if (impl_->is_product) {
      throw input_error("algebra: product algebras have no stored tables");
    }
    return impl_->tables[symbol];
  }

  element apply(std::size_t symbol, std::span<const element> args) const {
    if (!impl_->is_product) {
      return impl_->tables[symbol][detail::tuple_index(impl_->size, args)];
    }
    std::size_t m = impl_->factors.size();
    std::size_t arity = args.size();
    std::vector<element> coords(arity * m);
    for (std::size_t j = 0; j < arity; ++j) {
      decode_into(args[j], std::span<element>(coords).subspan(j * m, m));
    }
    std::vector<element> factor_args(arity);
    std::size_t result = 0;
    for (std::size_t k = 0; k < m; ++k) {
      for (std::size_t j = 0; j < arity; ++j) {
        factor_args[j] = coords[j * m + k];
      }
      result = result * impl_->radices[k] +
               impl_->factors[k].apply(symbol, factor_args);
    }
    return static_cast<element>(result);
  }

  /// Coordinates of a product element.
  std::vector<element> coordinates(element x) const {
    std::vector<element> coords(impl_->factors.size());
    decode_into(x, coords);
    return coords;
  }

  /// Inverse of coordinates().
  element encode(std::span<const element> coords) const {
    std::size_t result = 0;
    for (std::size_t k = 0; k < coords.size(); ++k) {
      result = result * impl_->radices[k] + coords[k];
    }
    return static_cast<element>(result);
  }

  /// A tabled copy with identical operations.
  FiniteAlgebra tabulate(Caps const& caps = {}) const {
    if (!impl_->is_product) {
      return *this;
    }
    return from_function(
        signature(), size(),
        [this](std::size_t s, std::span<const element> args) { return apply(s, args); },
        caps);
  }

  bool same_object(FiniteAlgebra const& other) const noexcept {
    return impl_ == other.impl_;
  }

  /// Same signature, same size and equal operations on every tuple.
  friend bool operator==(FiniteAlgebra const& a, FiniteAlgebra const& b) {
    if (a.impl_ == b.impl_) {
      return true;
    }
    if (a.signature() != b.signature() || a.size() != b.size()) {
      return false;
    }
    if (!a.is_product() && !b.is_product()) {
      return a.impl_->tables == b.impl_->tables;
    }
    for (std::size_t s = 0; s < a.signature().size(); ++s) {
      bool equal = true;
      for_each_tuple(a.size(), a.signature()[s].arity, [&](std::span<const element> t) {
        equal = equal && a.apply(s, t) == b.apply(s, t);
      });
      if (!equal) {
        return false;
      }
    }
    return true;
  }

 private:
  struct Impl {
    Signature signature;
    std::size_t size = 0;
    std::vector<std::vector<element>> tables;
    std::vector<FiniteAlgebra> factors;
    std::vector<std::size_t> radices;
    bool is_product = false;
  };

  explicit FiniteAlgebra(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

  void decode_into(element x, std::span<element> out) const {
    std::size_t v = x;
    for (std::size_t k = out.size(); k-- > 0;) {
      out[k] = static_cast<element>(v % impl_->radices[k]);
      v /= impl_->radices[k];
    }
  }

  std::shared_ptr<const Impl> impl_;
};

/// The one-element algebra of a signature.
inline FiniteAlgebra trivial_algebra(Signature signature) {
  return FiniteAlgebra::from_function(std::move(signature), 1,
                                      [](std::size_t, std::span<const element>) { return 0; });
}

/// A total function between universes.  Whether it is a homomorphism is a
/// separate, checkable property.
class AlgebraMap {
 public:
  AlgebraMap(FiniteAlgebra domain, FiniteAlgebra codomain, std::vector<element> values)
      : domain_(std::move(domain)), codomain_(std::move(codomain)), values_(std::move(values)) {
    if (values_.size() != domain_.size()) {
      throw input_error("map: " + std::to_string(values_.size()) +
                        " values for a domain of size " + std::to_string(domain_.size()));
    }
    for (std::size_t x = 0; x < values_.size(); ++x) {
      if (values_[x] >= codomain_.size()) {
        throw input_error("map: value [" + std::to_string(x) + "] = " +
                          std::to_string(values_[x]) + " is outside the codomain 0.." +
                          std::to_string(codomain_.size() - 1));
      }
    }
  }

  FiniteAlgebra const& domain() const noexcept { return domain_; }
  FiniteAlgebra const& codomain() const noexcept { return codomain_; }
  std::vector<element> const& values() const noexcept { return values_; }
  element operator()(element x) const { return values_[x]; }

  /// Equal values between universes of equal sizes.
  friend bool operator==(AlgebraMap const& a, AlgebraMap const& b) {
    return a.codomain_.size() == b.codomain_.size() && a.values_ == b.values_;
  }

 private:
  FiniteAlgebra domain_;
  FiniteAlgebra codomain_;
  std::vector<element> values_;
};

inline AlgebraMap identity_map(FiniteAlgebra const& a) {
  std::vector<element> values(a.size());
  std::iota(values.begin(), values.end(), element{0});
  return AlgebraMap(a, a, std::move(values));
}

inline AlgebraMap constant_map(FiniteAlgebra const& domain, FiniteAlgebra const& codomain,
                               element value) {
  return AlgebraMap(domain, codomain, std::vector<element>(domain.size(), value));
}

/// Composition in diagram order: x ↦ second(first(x)).
inline AlgebraMap compose(AlgebraMap const& first, AlgebraMap const& second) {
  if (first.codomain().size() != second.domain().size() ||
      first.codomain().signature() != second.domain().signature()) {
    throw input_error("compose: codomain of the first map is not the domain of the second");
  }
  std::vector<element> values(first.values().size());
  for (std::size_t x = 0; x < values.size(); ++x) {
    values[x] = second(first(static_cast<element>(x)));
  }
  return AlgebraMap(first.domain(), second.codomain(), std::move(values));
}

inline bool is_injective(AlgebraMap const& m) {
  std::vector<bool> hit(m.codomain().size(), false);
  for (element v : m.values()) {
    if (hit[v]) {
      return false;
    }
    hit[v] = true;
  }
  return true;
}

inline bool is_surjective(AlgebraMap const& m) {
  std::vector<bool> hit(m.codomain().size(), false);
  for (element v : m.values()) {
    hit[v] = true;
  }
  return std::find(hit.begin(), hit.end(), false) == hit.end();
}

/// Argument tuple on which m(op(args)) != op(m(args)).
struct HomomorphismViolation {
  std::size_t symbol = 0;
  std::vector<element> args;
  element image_of_result = 0;
  element result_of_images = 0;
};

inline std::optional<HomomorphismViolation> find_homomorphism_violation(AlgebraMap const& m) {
  auto const& dom = m.domain();
  auto const& cod = m.codomain();
  if (dom.signature() != cod.signature()) {
    throw signature_mismatch("homomorphism check: domain and codomain signatures differ");
  }
  std::optional<HomomorphismViolation> found;
  std::vector<element> images;
  for (std::size_t s = 0; s < dom.signature().size() && !found; ++s) {
    std::size_t arity = dom.signature()[s].arity;
    images.resize(arity);
    for_each_tuple(dom.size(), arity, [&](std::span<const element> args) {
      if (found) {
        return;
      }
      for (std::size_t j = 0; j < arity; ++j) {
        images[j] = m(args[j]);
      }
      element lhs = m(dom.apply(s, args));
      element rhs = cod.apply(s, images);
      if (lhs != rhs) {
        found = HomomorphismViolation{s, {args.begin(), args.end()}, lhs, rhs};
      }
    });
  }
  return found;
}

inline bool is_homomorphism(AlgebraMap const& m) {
  return !find_homomorphism_violation(m).has_value();
}

/// Fibers of m as a partition of its domain.
inline Partition kernel(AlgebraMap const& m) {
  return Partition::from_labels(std::span<const element>(m.values()));
}

}  // namespace rafilter
