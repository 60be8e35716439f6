#pragma once

#include <cstdint>

namespace rafilter {

/// An element of a finite universe 0..n-1.
using element = std::uint32_t;

}  // namespace rafilter
