#pragma once

#include <stdexcept>
#include <string>

namespace lambdap {

// Bad arguments are reported with std::invalid_argument.

/// A request exceeds the size an exhaustive routine supports.
class SizeLimitError : public std::length_error {
 public:
  explicit SizeLimitError(const std::string& what) : std::length_error(what) {}
};

/// No feasible parameter exists (e.g. the gamma condition cannot be met).
class InfeasibleError : public std::runtime_error {
 public:
  explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace lambdap
