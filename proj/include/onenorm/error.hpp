#pragma once

#include <stdexcept>
#include <string>

namespace onenorm {

/// Malformed or inconsistent input (files, arguments, partitions).
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// A numerical precondition failed (indefinite tensor, NaN objective, ...).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace onenorm
