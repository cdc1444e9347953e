#pragma once

#include <stdexcept>
#include <string>

namespace gro {

// Single error type for every precondition or numerical failure.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gro
