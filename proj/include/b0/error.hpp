#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace b0 {

// Exit-code bearing error hierarchy. The CLI maps each kind onto its exit code.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const { return 5; }
};

// Bad input: malformed files, invalid parameters, failed preconditions.
class UsageError : public Error {
public:
  using Error::Error;
  int exit_code() const override { return 2; }
};

class ParseError : public UsageError {
public:
  ParseError(const std::string &msg, std::size_t line, std::size_t column)
      : UsageError("line " + std::to_string(line) + ", column " +
                   std::to_string(column) + ": " + msg),
        line_(line), column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

private:
  std::size_t line_;
  std::size_t column_;
};

// A computation would exceed a configured size cap.
class CapExceeded : public Error {
public:
  CapExceeded(const std::string &what, std::size_t required, std::size_t cap)
      : Error(what + " requires " + std::to_string(required) +
              " elements (cap " + std::to_string(cap) + ")"),
        required_(required) {}
  int exit_code() const override { return 4; }
  std::size_t required() const { return required_; }

private:
  std::size_t required_;
};

// Violated internal invariant; never expected on consistent input.
class InternalError : public Error {
public:
  using Error::Error;
  int exit_code() const override { return 5; }
};

#define B0_ASSERT(cond, msg)                                                   \
  do {                                                                         \
    if (!(cond))                                                               \
      throw ::b0::InternalError(std::string("assertion failed: ") + (msg));    \
  } while (0)

} // namespace b0
