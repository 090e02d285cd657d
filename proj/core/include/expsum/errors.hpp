#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace expsum {

/// Invalid arguments or violated preconditions.
class domain_error : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A requested operation has no feasible result: a bracket was not found
/// inside the search window, an adjusted coefficient would not be positive,
/// or a share equation is unsolvable in the positive-share region.
class infeasible_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Floating-point overflow while evaluating a sum; carries the index of the
/// term whose power overflowed.
class evaluation_overflow : public std::range_error {
public:
  evaluation_overflow(const std::string& message, std::size_t term_index)
      : std::range_error(message), term_index_(term_index) {}

  std::size_t term_index() const noexcept { return term_index_; }

private:
  std::size_t term_index_;
};

}  // namespace expsum
