#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace copdyn {

// Malformed input data. Carries the 1-based line number when the source is
// line oriented (0 when not applicable).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Data parsed fine but cannot support the requested computation
// (zero-variance series, no complete return intervals, ...).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace copdyn
