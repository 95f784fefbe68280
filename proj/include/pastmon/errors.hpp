#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace pastmon {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Lexical or syntactic error in specification text.
class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& message,
             std::vector<std::string> expected = {});

  std::size_t position() const noexcept { return position_; }
  const std::string& detail() const noexcept { return detail_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  std::size_t position_;
  std::string detail_;
  std::vector<std::string> expected_;
};

/// A construct that is legal syntax but not supported by the monitor configuration.
class UnsupportedFeature : public Error {
 public:
  using Error::Error;
};

class CompileError : public Error {
 public:
  using Error::Error;
};

/// Malformed input message.
class DecodeError : public Error {
 public:
  using Error::Error;
};

/// Dense timestamps must increase strictly.
class MonotonicityError : public Error {
 public:
  using Error::Error;
};

/// A constraint met a field value of the wrong type.
class TypeError : public Error {
 public:
  using Error::Error;
};

/// The value dictionary ran out of codes for the configured bit width.
class CapacityError : public Error {
 public:
  using Error::Error;
};

}  // namespace pastmon
