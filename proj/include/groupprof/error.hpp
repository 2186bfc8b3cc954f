#pragma once

#include <stdexcept>
#include <string>

namespace groupprof {

// All library failures surface as this type; the message carries the
// offending file/line or id where one exists.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& message) : std::runtime_error(message) {}
};

}  // namespace groupprof
