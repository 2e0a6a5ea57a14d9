#pragma once

#include <stdexcept>
#include <string>

namespace ssent {

// Input violates a documented precondition (bad probabilities, eps out of
// range, index beyond the spectrum, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A computation would exceed a size guard (block count, dense expansion).
class ResourceLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Reading or writing a file failed.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ssent
