#pragma once

#include <stdexcept>
#include <string>

namespace jtprop {

/// Malformed input text (model or junction-tree file). Carries a 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// The model admits no distribution (e.g. the factor product is identically zero).
class InconsistentModelError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace jtprop
