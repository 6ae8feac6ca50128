#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pcf {

// Raised for malformed user input (bad syntax, schema violations). The CLI maps
// this to exit code 2.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

class ParseError : public InputError {
 public:
  ParseError(std::size_t offset, const std::string& message)
      : InputError("parse error at byte " + std::to_string(offset) + ": " + message),
        offset_(offset),
        message_(message) {}
  std::size_t offset() const { return offset_; }
  const std::string& message() const { return message_; }

 private:
  std::size_t offset_;
  std::string message_;
};

// Arithmetic impossibilities: division by a zero polynomial, singular matrices.
class MathError : public std::runtime_error {
 public:
  explicit MathError(const std::string& what) : std::runtime_error(what) {}
};

// A companion matrix has a pole (or a zero denominator) at an integer index.
class PoleError : public MathError {
 public:
  PoleError(long index, const std::string& what)
      : MathError(what + " at n=" + std::to_string(index)), index_(index) {}
  long index() const { return index_; }

 private:
  long index_;
};

// Convergent denominator vanished at the requested depth.
class ZeroDenominator : public MathError {
 public:
  explicit ZeroDenominator(long depth)
      : MathError("convergent denominator is zero at depth " + std::to_string(depth)),
        depth_(depth) {}
  long depth() const { return depth_; }

 private:
  long depth_;
};

class PrecisionError : public std::runtime_error {
 public:
  explicit PrecisionError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace pcf
