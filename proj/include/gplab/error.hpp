#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gplab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Violated precondition on an argument.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A tensor or kernel would exceed the configured memory guardrail.
class GuardrailError : public Error {
 public:
  using Error::Error;
};

// Solver non-convergence, bound-state detection, unresolved fits.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw InvalidArgument(message);
}

// Upper bound on the number of complex entries any single tensor may hold.
struct Guardrail {
  std::size_t max_entries = std::size_t{1} << 26;

  void check(std::size_t entries, const std::string& what) const {
    if (entries > max_entries) {
      throw GuardrailError(what + " needs " + std::to_string(entries) +
                           " complex entries (" +
                           std::to_string(entries * 16) +
                           " bytes), guardrail is " +
                           std::to_string(max_entries));
    }
  }
};

// Integer power with overflow saturation, for sizing checks.
inline std::size_t checked_pow(std::size_t base, std::size_t exponent) {
  std::size_t result = 1;
  for (std::size_t i = 0; i < exponent; ++i) {
    if (base != 0 && result > static_cast<std::size_t>(-1) / base) {
      return static_cast<std::size_t>(-1);
    }
    result *= base;
  }
  return result;
}

}  // namespace gplab
