#pragma once

#include <stdexcept>
#include <string>

namespace twistor {

// Bad user input: malformed config, out-of-range parameters, unreadable files.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical breakdown: step-size underflow, trapped orbit, solver divergence.
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Domain violations of library calls (points outside the disk, glancing input
// where a transversal chord is required, ...).
struct DomainError : std::invalid_argument {
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

inline void require(bool cond, const char* msg) {
  if (!cond) throw DomainError(msg);
}

}  // namespace twistor
