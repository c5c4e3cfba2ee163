#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vnorm {

// A precondition or model invariant was violated by the caller's input.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An exact computation was asked to enumerate beyond its size limit.
class GuardError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Malformed serialized input. offset is the byte position of the problem.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " at byte offset " + std::to_string(offset)), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

// A file could not be opened, read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An iterative numerical method failed to converge.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace vnorm
