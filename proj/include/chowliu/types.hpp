#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace chowliu {

using Node = std::size_t;
using Symbol = std::uint8_t;

inline constexpr Node kNoParent = std::numeric_limits<Node>::max();

/// Default cap on dense table size (entries), k^n <= 2^24.
inline constexpr std::size_t kDefaultDenseCap = std::size_t{1} << 24;

/// Symbols are 0..size()-1. Samples store symbols in one byte, hence the upper bound.
class Alphabet {
 public:
  explicit Alphabet(std::size_t size) : size_(size) {
    if (size < 2 || size > 256) {
      throw std::invalid_argument("alphabet size must be in [2, 256], got " + std::to_string(size));
    }
  }
  std::size_t size() const noexcept { return size_; }
  bool operator==(const Alphabet&) const = default;

 private:
  std::size_t size_;
};

/// Raised by file readers; carries the 1-based line (or record) number.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace chowliu
