#pragma once

#include <stdexcept>
#include <string>

namespace skewlab {

// Error taxonomy shared by every module. The CLI maps the categories onto
// exit codes (see tools/skewlab.cpp).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed arguments: empty quotient list, d not dividing z, ...
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// A documented precondition of a lemma or routine does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Index or parameter outside the range where a guarantee applies.
class RangeError : public Error {
 public:
  using Error::Error;
};

// Not enough working precision for the requested quantity.
class PrecisionError : public Error {
 public:
  explicit PrecisionError(const std::string& what, long last_reliable = -1)
      : Error(what), last_reliable_(last_reliable) {}
  long last_reliable() const noexcept { return last_reliable_; }

 private:
  long last_reliable_;
};

// Memory or time budget would be exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

// A checked mathematical property failed on an input where it must hold.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

// Operation called on an object that is not ready (e.g. unsolved stage).
class StateError : public Error {
 public:
  using Error::Error;
};

// Counterexample construction cannot proceed (empty window, ...).
class ConstructionError : public Error {
 public:
  using Error::Error;
};

// A verification cannot be certified with the data available.
class IncompleteError : public Error {
 public:
  using Error::Error;
};

}  // namespace skewlab
