#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace growthlab {

// Base of every error thrown by the library. `kind()` is a stable short tag
// that the CLI copies into its structured diagnostics.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
  virtual const char* kind() const noexcept { return "error"; }
};

class MalformedInput : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "malformed_input"; }
};

class DescriptorMismatch : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "descriptor_mismatch"; }
};

class Unsupported : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "unsupported"; }
};

class RangeError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "range_error"; }
};

// Raised when an enumeration would exceed its element or search budget.
// Never accompanied by silently truncated results.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, std::size_t radius_reached)
      : Error(what), radius_reached_(radius_reached) {}
  const char* kind() const noexcept override { return "budget_exceeded"; }
  /// Largest radius that was completed before the budget ran out.
  std::size_t radius_reached() const noexcept { return radius_reached_; }

 private:
  std::size_t radius_reached_;
};

}  // namespace growthlab
