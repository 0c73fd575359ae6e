#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "chowliu/samples.hpp"

namespace chowliu {

/// One k*k count table per column pair (i < j), pairs in lexicographic order.
class PairCounts {
 public:
  PairCounts(std::size_t n, std::size_t k);

  std::size_t n() const noexcept { return n_; }
  std::size_t k() const noexcept { return k_; }
  std::size_t pair_index(std::size_t i, std::size_t j) const;
  std::span<const std::uint64_t> table(std::size_t i, std::size_t j) const;
  std::span<std::uint64_t> raw() noexcept { return counts_; }

  /// Additive; associative and order-independent.
  void merge(const PairCounts& other);

  bool operator==(const PairCounts&) const = default;

 private:
  std::size_t n_;
  std::size_t k_;
  std::vector<std::uint64_t> counts_;
};

/// Single pass over the rows; the reference implementation.
PairCounts accumulate_pair_counts_serial(const SampleSet& s);

/// Rows split into contiguous chunks, one private PairCounts per thread, then
/// merged. threads <= 0 uses the OpenMP default.
PairCounts accumulate_pair_counts(const SampleSet& s, int threads = 0);

/// Joint count table of the listed columns, mixed-radix with the first column
/// most significant.
std::vector<std::uint64_t> count_columns_serial(const SampleSet& s, std::span<const std::size_t> columns);
std::vector<std::uint64_t> count_columns(const SampleSet& s, std::span<const std::size_t> columns, int threads = 0);

}  // namespace chowliu
