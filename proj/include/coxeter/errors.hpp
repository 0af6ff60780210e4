#pragma once

#include <stdexcept>

namespace coxeter {

/// Malformed diagram text, word text, or generator-map text.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A braid-closure search grew past its word budget. The instance is beyond
/// desk scale; the result is "don't know", never a wrong answer.
struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An enumeration hit its cap: either the group is too large (or infinite),
/// or an exhaustive search was asked for more than it is sized to handle.
struct CapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An exhaustive check of a property that must hold found a counterexample.
/// This falsifies the implementation, not the mathematics.
struct Falsified : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace coxeter
