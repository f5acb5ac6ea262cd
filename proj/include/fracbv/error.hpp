#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fracbv {

/// Precondition violated by the caller.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Requested configuration is outside what the discretization can represent.
class Unsupported : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CalibrationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A density pipeline could not reach its target at the current resolution.
class ResolutionFailure : public std::runtime_error {
 public:
  ResolutionFailure(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_(achieved) {}
  double achieved() const { return achieved_; }

 private:
  double achieved_;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " (at byte " + std::to_string(offset) + ")"),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fracbv
