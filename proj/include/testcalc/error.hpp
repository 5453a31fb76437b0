#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace testcalc {

// Every library failure derives from Error. The category decides the CLI
// exit code: Input -> 2, Analysis -> 1, Limit -> 3.
class Error : public std::runtime_error {
 public:
  enum class Category { Input, Analysis, Limit };

  Error(Category category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  Category category() const noexcept { return category_; }

 private:
  Category category_;
};

class InputError : public Error {
 public:
  explicit InputError(const std::string& what) : Error(Category::Input, what) {}
};

class AnalysisError : public Error {
 public:
  explicit AnalysisError(const std::string& what) : Error(Category::Analysis, what) {}
};

class LimitError : public Error {
 public:
  explicit LimitError(const std::string& what) : Error(Category::Limit, what) {}
};

// Text-level syntax failure. Line and column are 1-based; column 0 means
// "whole line".
class SyntaxError : public InputError {
 public:
  SyntaxError(std::size_t line, std::size_t column, const std::string& expected)
      : InputError(format(line, column, expected)),
        line_(line),
        column_(column),
        expected_(expected) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& expected() const noexcept { return expected_; }

 private:
  static std::string format(std::size_t line, std::size_t column, const std::string& expected) {
    std::string out = "syntax error at line " + std::to_string(line);
    if (column != 0) out += ", column " + std::to_string(column);
    return out + ": expected " + expected;
  }

  std::size_t line_;
  std::size_t column_;
  std::string expected_;
};

}  // namespace testcalc
