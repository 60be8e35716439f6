#pragma once

#include <cstddef>
#include <cstdint>

namespace rafilter {

/// Limits on the exhaustive enumerations.  Every operation that can blow up
/// combinatorially checks the relevant field and throws cap_exceeded.
struct Caps {
  /// Largest algebra whose congruence lattice is enumerated.
  std::size_t max_algebra_size = 8;
  /// Largest index set for which factoring families are materialized.
  /// Bitmasks are 32-bit, and anything past 24 is refused outright.
  std::size_t max_index_set = 16;
  /// Largest direct product (number of elements).
  std::size_t max_product_size = 1'000'000;
  /// Largest operation table materialized by quotients and free algebras.
  std::size_t max_table_entries = std::size_t{1} << 24;
  /// Largest number of coordinates |A|^k of a free algebra.
  std::size_t max_free_coordinates = 12;
};

inline constexpr std::size_t hard_index_set_limit = 24;

/// Options of the theorem pipeline beyond the caps.
struct PipelineConfig {
  Caps caps{};
  /// Index sets up to this size get every partition checked for the
  /// completeness property; larger ones are sampled.
  std::size_t exhaustive_partition_limit = 8;
  std::size_t sampled_partitions = 1000;
  std::uint64_t seed = 42;
};

}  // namespace rafilter
