#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chowliu/types.hpp"

namespace chowliu {

/// N rows of n symbols, row-major.
class SampleSet {
 public:
  SampleSet(std::size_t n, Alphabet alphabet, std::vector<Symbol> rows);

  std::size_t n() const noexcept { return n_; }
  std::size_t k() const noexcept { return alphabet_.size(); }
  Alphabet alphabet() const noexcept { return alphabet_; }
  std::size_t size() const noexcept { return n_ == 0 ? 0 : rows_.size() / n_; }
  bool empty() const noexcept { return rows_.empty(); }

  std::span<const Symbol> row(std::size_t i) const { return {rows_.data() + i * n_, n_}; }
  Symbol at(std::size_t i, std::size_t j) const { return rows_[i * n_ + j]; }
  std::span<const Symbol> data() const noexcept { return rows_; }

  /// Keeps the listed columns, in the listed order.
  SampleSet select_columns(std::span<const std::size_t> columns) const;

  bool operator==(const SampleSet&) const = default;

 private:
  std::size_t n_;
  Alphabet alphabet_;
  std::vector<Symbol> rows_;
};

// CSV: one row per sample, comma-separated integer symbols, no header.
// When k is not given it is inferred as max(2, largest symbol + 1).
SampleSet read_samples_csv(std::istream& in, std::optional<std::size_t> k = std::nullopt);
void write_samples_csv(std::ostream& out, const SampleSet& s);

// Binary: "CLS1", u32 n, u32 k, u64 N (little-endian), then N*n symbol bytes.
SampleSet read_samples_binary(std::istream& in);
void write_samples_binary(std::ostream& out, const SampleSet& s);

/// Picks the format from the leading magic bytes.
SampleSet load_samples(const std::string& path, std::optional<std::size_t> k = std::nullopt);
void save_samples(const std::string& path, const SampleSet& s, bool binary);

}  // namespace chowliu
