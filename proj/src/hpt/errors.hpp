#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hpt {

// Non-finite input or a violated precondition.
class ValueError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Frame timestamp did not advance past the session's last timestamp.
class OrderingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Innovation covariance too ill-conditioned to solve; session needs re-init.
class DegradedCovarianceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(line ? what + " (line " + std::to_string(line) + ")" : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hpt
