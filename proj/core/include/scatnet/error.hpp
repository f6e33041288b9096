#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace scatnet {

// Base of every error the library raises. Callers that only care about
// "something went wrong" catch this; the CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid argument, configuration value or precondition.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Filter bank whose Littlewood-Paley lower bound falls below the accepted floor.
class DegenerateBankError : public Error {
 public:
  DegenerateBankError(const std::string& what, double lower_bound)
      : Error(what), lower_bound_(lower_bound) {}
  double lower_bound() const { return lower_bound_; }

 private:
  double lower_bound_;
};

// Input data that cannot be processed (non-finite values, missing classes).
class DataError : public Error {
 public:
  using Error::Error;
};

// Malformed binary file. Carries the byte offset where decoding failed.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::uint64_t offset)
      : Error(what + " (at byte offset " + std::to_string(offset) + ")"),
        offset_(offset) {}
  std::uint64_t offset() const { return offset_; }

 private:
  std::uint64_t offset_;
};

// Image file that could not be decoded.
class IngestionError : public Error {
 public:
  IngestionError(const std::string& file, const std::string& reason)
      : Error(file + ": " + reason), file_(file) {}
  const std::string& file() const { return file_; }

 private:
  std::string file_;
};

// Broken internal invariant (should be unreachable with a validated config).
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace scatnet
