#pragma once

#include <stdexcept>

namespace optbench {

// Caller violated an operation's contract (bad lengths, bad option, bad index).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Non-finite or otherwise out-of-domain numeric input.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A mathematical precondition of a result does not hold (e.g. gamma >= 1).
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace optbench
