#pragma once

#include <stdexcept>
#include <string>

namespace trajattack {

/// Base class for recoverable runtime failures (bad input files, numerical
/// breakdown). Precondition violations on API arguments throw
/// std::invalid_argument instead.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input; carries the 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Well-formed JSON whose structure does not match the expected schema.
class SchemaError : public Error {
 public:
  SchemaError(const std::string& field_path, const std::string& what)
      : Error("schema mismatch at '" + field_path + "': " + what), field_(field_path) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Past/future lengths disagree with a predictor or another input.
class HorizonMismatch : public Error {
 public:
  using Error::Error;
};

}  // namespace trajattack
