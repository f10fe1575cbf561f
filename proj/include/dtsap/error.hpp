#pragma once

#include <stdexcept>
#include <string>

namespace dtsap {

// Single exception type for all contract violations raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dtsap
