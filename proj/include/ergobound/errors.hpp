#pragma once

#include <stdexcept>
#include <string>

namespace ergobound {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on the inputs failed; the message names the violated invariant.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

class NoSignChange : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public Error {
 public:
  using Error::Error;
};

/// Raised when a truncated series leaves a tail comparable to its value.
class TruncationTooShort : public Error {
 public:
  using Error::Error;
};

/// A formula was evaluated outside the region where its denominators stay positive.
class DomainExceeded : public Error {
 public:
  using Error::Error;
};

/// Probability mass reached the boundary of a truncated state space.
class MassLeak : public Error {
 public:
  using Error::Error;
};

}  // namespace ergobound
