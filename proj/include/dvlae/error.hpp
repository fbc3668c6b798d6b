#pragma once

#include <stdexcept>
#include <string>

namespace dvlae {

/// User-facing failure: bad input, bad configuration, contract violation by
/// the caller. The CLI maps it to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an input file cannot be parsed; carries the location.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t frame, std::size_t line)
      : Error(what), frame_(frame), line_(line) {}

  std::size_t frame() const noexcept { return frame_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t frame_;
  std::size_t line_;
};

}  // namespace dvlae
