#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace resm {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text. line() is 1-based, 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class OovError : public Error {
 public:
  explicit OovError(const std::string& token)
      : Error("out-of-vocabulary token '" + token + "'"), token_(token) {}
  const std::string& token() const { return token_; }

 private:
  std::string token_;
};

// Zero norms, non-finite results.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Caller violated an operation's precondition or passed an invalid config.
class ContractError : public Error {
 public:
  using Error::Error;
};

// Inconsistent pipeline configuration or bad command-line usage.
class UsageError : public Error {
 public:
  using Error::Error;
};

// Wraps (via std::nested_exception) an error raised inside a named pipeline
// stage such as "load embeddings" or "retrofit".
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& what)
      : Error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

}  // namespace resm
