#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace delearn {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A documented precondition of an operation did not hold.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// Two objects built over different vocabularies were combined.
class VocabularyMismatch : public ContractViolation {
 public:
  using ContractViolation::ContractViolation;
};

class InapplicableEvent : public ContractViolation {
 public:
  using ContractViolation::ContractViolation;
};

/// An enumeration would exceed the configured size limit.
class CapacityError : public Error {
 public:
  CapacityError(const std::string& what, std::size_t size, std::size_t limit)
      : Error(what + " (size " + std::to_string(size) + ", limit " + std::to_string(limit) + ")"),
        size_(size),
        limit_(limit) {}

  std::size_t size() const noexcept { return size_; }
  std::size_t limit() const noexcept { return limit_; }

 private:
  std::size_t size_;
  std::size_t limit_;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace delearn
