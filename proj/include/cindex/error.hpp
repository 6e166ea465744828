#pragma once

#include <stdexcept>
#include <string>

namespace cindex {

// Input errors are the caller's fault (bad data, bad options). Computation
// errors come from otherwise valid input on which an estimator is undefined.
class Error : public std::runtime_error {
 public:
  enum class Kind { input, computation };

  Error(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

class InputError : public Error {
 public:
  explicit InputError(const std::string& what) : Error(Kind::input, what) {}
};

class ComputationError : public Error {
 public:
  explicit ComputationError(const std::string& what) : Error(Kind::computation, what) {}
};

// Thrown when an estimator's denominator is zero.
class NoComparablePairs : public ComputationError {
 public:
  NoComparablePairs() : ComputationError("no comparable pairs") {}
};

}  // namespace cindex
