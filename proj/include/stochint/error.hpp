#pragma once

#include <stdexcept>
#include <string>

namespace stochint {

// Raised when a configured resource limit (degree cap, table budget) would be exceeded.
class LimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace stochint
