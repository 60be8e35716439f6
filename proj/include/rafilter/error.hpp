#pragma once

#include <stdexcept>
#include <string>

namespace rafilter {

/// Base class of every exception thrown by the library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input: table entries out of range, bad index
/// sets, maps that are not total, and so on.
class input_error : public error {
 public:
  using error::error;
};

/// Two algebras that must share a signature do not.
class signature_mismatch : public error {
 public:
  using error::error;
};

/// An enumeration would exceed one of the configured caps.
class cap_exceeded : public error {
 public:
  using error::error;
};

/// A mathematical hypothesis of an operation does not hold for its input.
class precondition_error : public error {
 public:
  using error::error;
};

}  // namespace rafilter
