#pragma once

#include <stdexcept>
#include <string>

namespace treeshift {

/// Unknown vertex, malformed argument, or invalid tree structure.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// A truncation window is too small for the requested computation.
class WindowError : public std::runtime_error {
 public:
  explicit WindowError(const std::string& what) : std::runtime_error(what) {}
};

/// An operation was called on an input outside its precondition
/// (e.g. decomposing a shift that is not normal).
class PreconditionError : public std::logic_error {
 public:
  explicit PreconditionError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace treeshift
