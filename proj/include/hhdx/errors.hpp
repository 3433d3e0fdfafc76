#pragma once

#include <stdexcept>
#include <string>

namespace hhdx {

/// A computation would exceed one of the fixed desk-scale caps.
class CapacityError : public std::runtime_error {
 public:
  explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

/// A truncation window is too small to certify the requested result.
class TruncationError : public std::runtime_error {
 public:
  explicit TruncationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hhdx
