#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace perronroot {

/// Base for every error raised by the library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class dimension_mismatch : public error {
 public:
  using error::error;
};

/// A value violated a domain contract (negative entry, non-finite value,
/// overflow, a generated term leaving the nonnegative cone).
class domain_violation : public error {
 public:
  using error::error;
};

/// The input is valid but the operation's structural precondition does not
/// hold (e.g. a reducible matrix where an irreducible one is required).
class precondition_error : public error {
 public:
  using error::error;
};

/// Malformed matrix text. Line and column are 1-based; column 0 means the
/// whole line.
class parse_error : public error {
 public:
  parse_error(std::size_t line, std::size_t column, const std::string& what)
      : error("line " + std::to_string(line) + ", column " +
              std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace perronroot
