#pragma once

#include <stdexcept>
#include <string>

namespace shrinklab {

// Exit-code convention used by the CLI:
//   0 pass, 1 verified inequality/criterion failed, 2 usage/config error,
//   3 numerical failure (divergence, NaN, unreliable tails).

// Bad arguments, malformed specs, out-of-scope parameters (exit 2).
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Divergence, non-finite values, unreliable series tails (exit 3).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// A verified inequality or solvability criterion failed (exit 1).
class CriterionError : public std::runtime_error {
public:
    explicit CriterionError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace shrinklab
