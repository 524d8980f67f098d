#pragma once

#include <stdexcept>
#include <string>

namespace infnear {

/// Malformed or out-of-contract input: bad DSL, invalid skeleton, a request
/// that violates an operation's precondition.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A cross-check between two independent computations disagreed. This is a
/// bug trap, never a user error.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline void internal_check(bool ok, const std::string& what) {
  if (!ok) throw InternalError(what);
}

}  // namespace infnear
