#pragma once

#include <stdexcept>

namespace fewrel {

/// An input does not meet the hypothesis an operation is built on.
class HypothesisError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A configured budget (term cap, enumeration size, search bound) was exceeded.
class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A structural property that should hold by construction failed.
class StructureViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace fewrel
