#pragma once

#include <stdexcept>
#include <string>

namespace otbary {

// Invalid inputs: bad weights, dimension mismatches, malformed files,
// out-of-range configuration. Maps to CLI exit code 1.
class ValidationError : public std::runtime_error {
public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical breakdown: solver iteration caps, non-PD matrices,
// non-finite objectives. Maps to CLI exit code 2.
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace otbary
