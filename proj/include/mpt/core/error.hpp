#pragma once

#include <stdexcept>
#include <string>

namespace mpt {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. `line()` is 1-based, 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const noexcept { return line_; }

  /// Same error with `context` (typically a path) prepended to the message.
  ParseError with_context(const std::string& context) const { return ParseError(context + ": " + what(), line_, 0); }

 private:
  ParseError(const std::string& full, int line, int) : Error(full), line_(line) {}
  int line_;
};

/// Well-formed input that violates a semantic rule (duplicate keys, bad ranges, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Scenario cannot be realised with the requested parameters.
class GenerationError : public Error {
 public:
  using Error::Error;
};

/// Incompatible array / grid / image dimensions.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Filesystem or codec failure, message carries the offending path.
class IoError : public Error {
 public:
  IoError(const std::string& what, const std::string& path) : Error(path + ": " + what), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace mpt
