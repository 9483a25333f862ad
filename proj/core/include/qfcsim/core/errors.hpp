#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace qfcsim {

// Input outside an operation's mathematical domain (non-positive wavelength,
// pump shorter than signal, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Invalid simulation or scenario configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An estimator could not produce a result from the data it was given.
class EstimatorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed QTT1 stream. Carries the byte offset of the offending field.
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& what, std::uint64_t byte_offset)
      : std::runtime_error(what + " at byte offset " + std::to_string(byte_offset)),
        offset_(byte_offset) {}

  std::uint64_t byte_offset() const noexcept { return offset_; }

 private:
  std::uint64_t offset_;
};

}  // namespace qfcsim
