#ifndef TALGEBRA_ERROR_HPP
#define TALGEBRA_ERROR_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace talgebra {

// Argument errors use std::invalid_argument directly.

/// A numerical precondition failed, e.g. a slice that should be Hermitian is not.
class NumericDomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed input file. `offset()` is the byte position where parsing stopped.
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& what, std::uint64_t offset)
      : std::runtime_error(what + " (at byte offset " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::uint64_t offset() const noexcept { return offset_; }

 private:
  std::uint64_t offset_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace talgebra

#endif  // TALGEBRA_ERROR_HPP
