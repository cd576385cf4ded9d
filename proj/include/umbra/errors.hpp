#pragma once

#include <stdexcept>
#include <string>

namespace umbra {

/// Bad arguments or malformed input (CLI exit code 2).
class ArgumentError : public std::invalid_argument {
 public:
  explicit ArgumentError(const std::string& what) : std::invalid_argument(what) {}
};

/// An iteration failed to converge (CLI exit code 3).
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

/// A lemma hypothesis does not hold for the given configuration; the input is
/// valid but no conclusion can be drawn (CLI exit code 4).
class HypothesisError : public std::runtime_error {
 public:
  explicit HypothesisError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace umbra
