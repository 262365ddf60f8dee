#pragma once

#include <stdexcept>

namespace wsrc {

// Malformed or inconsistent input data. The CLI maps this to exit status 2;
// std::invalid_argument (bad parameters) maps to exit status 1.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace wsrc
